#pragma once

#include <cstdint>
#include <vector>

#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Exact evaluation enumerates all nonempty subsets of the assortment; above
/// this size the exact operations refuse and callers should switch to Monte
/// Carlo estimation.
inline constexpr int kDefaultExactCap = 20;

/// An opaque price rho together with the revenue and choice distribution it
/// induces on a fixed assortment. half_width is the confidence half-width of
/// a Monte-Carlo estimate (0 in exact mode). guard_disagreement is set by the
/// price line search when its two search strategies disagree, flagging a
/// possible failure of the unimodality assumption.
struct OpaqueQuote {
    enum class Mode { exact, monte_carlo };

    double rho = 0.0;
    double revenue = 0.0;
    ChoiceDistribution distribution;
    Mode mode = Mode::exact;
    double half_width = 0.0;
    std::uint64_t samples = 0;
    bool guard_disagreement = false;
};

/// Purchase probabilities when the assortment S is offered together with an
/// opaque product at price rho. The opaque product is fulfilled with an
/// arbitrary member of S, so a risk-averse customer values it at the minimum
/// realized valuation over S.
///
/// For rho <= min_{i in S} r_i the probabilities come from an
/// inclusion-exclusion sum over all nonempty subsets I of S, each term being
/// a plain logit evaluation with the prices of I replaced by rho. For larger
/// rho the opaque product is never chosen and the result equals
/// trad_choice_prob.
ChoiceDistribution opq_choice_prob_exact(const MarketInstance& inst, const Assortment& S,
                                         double rho, int exact_cap = kDefaultExactCap);

/// Expected revenue of the same model: the alternating subset sum of repriced
/// traditional revenues for rho <= min r, trad_revenue otherwise (same code
/// path, so the two branches agree bit-for-bit at that boundary).
double opq_revenue_exact(const MarketInstance& inst, const Assortment& S, double rho,
                         int exact_cap = kDefaultExactCap);

/// Revenue and distribution in one evaluation (mode = exact, half_width = 0).
OpaqueQuote opq_quote_exact(const MarketInstance& inst, const Assortment& S, double rho,
                            int exact_cap = kDefaultExactCap);

/// The convex-combination identity for uniform prices: with every product of
/// S priced at r and an opaque price rho <= r,
///   Rev(Opq) = theta * Rev(Trad at rho) + (1 - theta) * Rev(Trad at r)
/// where theta = p_opaque / (total traditional purchase probability at price
/// rho). Returns theta together with both sides of the identity.
struct Decomposition {
    double theta = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
};

Decomposition uniform_price_decomposition(const MarketInstance& inst, const Assortment& S,
                                          double r, double rho,
                                          int exact_cap = kDefaultExactCap);

namespace detail {

struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double get() const { return s; }
};

/// Subset-sum tables for one (instance, assortment) pair. The tables do not
/// depend on rho (the repriced weights factor as e^{-rho} * e^{v_i}), so a
/// line search over rho pays the table build once and each revenue evaluation
/// costs one pass over the 2^|S|-1 subset masks.
class OpaqueEvaluator {
public:
    OpaqueEvaluator(const MarketInstance& inst, const Assortment& S,
                    int exact_cap = kDefaultExactCap);

    double min_price() const { return minr_; }

    /// Inclusion-exclusion revenue; requires 0 <= rho <= min_price().
    double revenue(double rho) const;

    /// Inclusion-exclusion distribution under the same precondition.
    ChoiceDistribution distribution(double rho) const;

private:
    std::vector<int> members_;
    int k_;
    double minr_;
    double w0_;            // shifted no-purchase weight e^{-m}
    double base_;          // w0 + sum of all e^{v_i - r_i - m}
    double sum_ra_full_;
    std::vector<double> a_;       // e^{v_i - r_i - m} per member
    std::vector<double> sum_a_;   // subset sums of a
    std::vector<double> sum_ra_;  // subset sums of r_i * a_i
    std::vector<double> sum_w_;   // subset sums of e^{v_i - m}
};

}  // namespace detail

}  // namespace opaque_mnl
