#include "opaque_mnl/traditional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opaque_mnl {

namespace detail {

double logsumexp_v(const std::vector<double>& v, const std::vector<int>& members) {
    double m = -std::numeric_limits<double>::infinity();
    for (int i : members) m = std::max(m, v[static_cast<std::size_t>(i)]);
    double s = 0.0;
    for (int i : members) s += std::exp(v[static_cast<std::size_t>(i)] - m);
    return m + std::log(s);
}

namespace {

// Shift every exponent by m = max(0, max_i(v_i - p_i)) so the largest weight
// is e^0; the no-purchase weight becomes e^{-m}.
double weight_shift(const std::vector<double>& v, const std::vector<double>& prices,
                    const std::vector<int>& members) {
    double m = 0.0;
    for (int idx : members) {
        auto i = static_cast<std::size_t>(idx);
        m = std::max(m, v[i] - prices[i]);
    }
    return m;
}

}  // namespace

ChoiceDistribution logit_probs(const std::vector<double>& v,
                               const std::vector<double>& prices,
                               const std::vector<int>& members) {
    const double m = weight_shift(v, prices, members);
    const double w0 = std::exp(-m);
    double denom = w0;
    ChoiceDistribution dist;
    for (int idx : members) {
        auto i = static_cast<std::size_t>(idx);
        double w = std::exp(v[i] - prices[i] - m);
        dist.p_product[idx] = w;
        denom += w;
    }
    for (auto& [i, p] : dist.p_product) p /= denom;
    dist.p_opaque = 0.0;
    dist.p_none = w0 / denom;
    return dist;
}

double logit_revenue(const std::vector<double>& v, const std::vector<double>& prices,
                     const std::vector<int>& members) {
    const double m = weight_shift(v, prices, members);
    double denom = std::exp(-m);
    double num = 0.0;
    for (int idx : members) {
        auto i = static_cast<std::size_t>(idx);
        double w = std::exp(v[i] - prices[i] - m);
        denom += w;
        num += prices[i] * w;
    }
    return num / denom;
}

}  // namespace detail

ChoiceDistribution trad_choice_prob(const MarketInstance& inst, const Assortment& S) {
    return detail::logit_probs(inst.v(), inst.r(), S.members());
}

double trad_revenue(const MarketInstance& inst, const Assortment& S) {
    if (S.empty()) return 0.0;
    return detail::logit_revenue(inst.v(), inst.r(), S.members());
}

std::vector<double> substituted_prices(const MarketInstance& inst, const Assortment& S,
                                       const Assortment& I, double rho) {
    for (int i : I.members())
        if (!S.contains(i))
            throw std::invalid_argument("substituted_prices: product " +
                                        std::to_string(i + 1) +
                                        " of I is not in the assortment");
    if (!(rho >= 0.0))
        throw std::invalid_argument("field 'rho': must be >= 0");
    std::vector<double> out;
    out.reserve(S.members().size());
    for (int i : S.members())
        out.push_back(I.contains(i) ? rho : inst.r()[static_cast<std::size_t>(i)]);
    return out;
}

double optimal_uniform_price(const MarketInstance& inst, const Assortment& S) {
    if (S.empty())
        throw std::invalid_argument("optimal_uniform_price: assortment must be nonempty");
    const double logA = detail::logsumexp_v(inst.v(), S.members());

    // f(r) = r - 1 - e^{logA - r} is strictly increasing with a single root
    // above 1. Bracket it, then run Newton clamped to the bracket.
    auto f = [logA](double r) { return r - 1.0 - std::exp(logA - r); };
    double lo = 1.0;
    double hi = logA <= 30.0 ? 1.0 + std::exp(logA) : 2.0 + logA;
    double r = std::max(logA <= 30.0 ? 1.0 + std::log1p(std::exp(logA)) : 1.0 + logA,
                        1.5);
    r = std::clamp(r, lo, hi);
    for (int it = 0; it < 200; ++it) {
        double fr = f(r);
        if (std::abs(fr) <= 1e-13 * std::max(1.0, r)) break;
        (fr < 0.0 ? lo : hi) = r;
        double step = fr / (1.0 + std::exp(logA - r));
        double next = r - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == r) break;
        r = next;
    }
    if (std::abs(f(r)) > 1e-10)
        throw std::runtime_error("optimal_uniform_price: residual above 1e-10");
    return r;
}

}  // namespace opaque_mnl
