#include "opaque_mnl/opaque.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "opaque_mnl/traditional.hpp"

namespace opaque_mnl {

namespace {

void check_opaque_pre(const Assortment& S, double rho, int exact_cap) {
    if (S.empty())
        throw std::invalid_argument("opaque evaluation requires a nonempty assortment");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::invalid_argument("field 'rho': must be finite and >= 0");
    if (S.size() > exact_cap)
        throw std::invalid_argument(
            "assortment size " + std::to_string(S.size()) +
            " exceeds the exact-mode cap of " + std::to_string(exact_cap) +
            "; use Monte Carlo evaluation");
}

double min_price_over(const MarketInstance& inst, const Assortment& S) {
    double m = std::numeric_limits<double>::infinity();
    for (int i : S.members()) m = std::min(m, inst.r()[static_cast<std::size_t>(i)]);
    return m;
}

}  // namespace

namespace detail {

OpaqueEvaluator::OpaqueEvaluator(const MarketInstance& inst, const Assortment& S,
                                 int exact_cap)
    : members_(S.members()), k_(S.size()) {
    check_opaque_pre(S, 0.0, exact_cap);
    minr_ = min_price_over(inst, S);

    // Shift exponents by m = max(0, max v_i) over S; since prices and rho are
    // nonnegative this bounds every weight by 1.
    double m = 0.0;
    for (int i : members_) m = std::max(m, inst.v()[static_cast<std::size_t>(i)]);
    w0_ = std::exp(-m);

    a_.resize(static_cast<std::size_t>(k_));
    std::vector<double> w(static_cast<std::size_t>(k_));
    std::vector<double> ra(static_cast<std::size_t>(k_));
    base_ = w0_;
    sum_ra_full_ = 0.0;
    for (int j = 0; j < k_; ++j) {
        auto i = static_cast<std::size_t>(members_[static_cast<std::size_t>(j)]);
        auto ju = static_cast<std::size_t>(j);
        a_[ju] = std::exp(inst.v()[i] - inst.r()[i] - m);
        w[ju] = std::exp(inst.v()[i] - m);
        ra[ju] = inst.r()[i] * a_[ju];
        base_ += a_[ju];
        sum_ra_full_ += ra[ju];
    }

    const std::size_t size = std::size_t{1} << k_;
    sum_a_.assign(size, 0.0);
    sum_ra_.assign(size, 0.0);
    sum_w_.assign(size, 0.0);
    for (std::size_t mask = 1; mask < size; ++mask) {
        std::size_t low = mask & (~mask + 1);
        std::size_t rest = mask ^ low;
        auto j = static_cast<std::size_t>(std::countr_zero(low));
        sum_a_[mask] = sum_a_[rest] + a_[j];
        sum_ra_[mask] = sum_ra_[rest] + ra[j];
        sum_w_[mask] = sum_w_[rest] + w[j];
    }
}

double OpaqueEvaluator::revenue(double rho) const {
    const double t = std::exp(-rho);
    const std::size_t size = std::size_t{1} << k_;
    KahanSum acc;
    for (std::size_t mask = 1; mask < size; ++mask) {
        double tw = t * sum_w_[mask];
        double d = base_ - sum_a_[mask] + tw;
        if (!(d > 0.0)) continue;
        double num = (sum_ra_full_ - sum_ra_[mask]) + rho * tw;
        double term = num / d;
        acc.add(std::popcount(mask) & 1 ? term : -term);
    }
    return acc.get();
}

ChoiceDistribution OpaqueEvaluator::distribution(double rho) const {
    const double t = std::exp(-rho);
    const std::size_t size = std::size_t{1} << k_;
    std::vector<KahanSum> per_product(static_cast<std::size_t>(k_));
    KahanSum acc_q;
    KahanSum acc_0;
    for (std::size_t mask = 1; mask < size; ++mask) {
        double d = base_ - sum_a_[mask] + t * sum_w_[mask];
        if (!(d > 0.0)) continue;
        double sd = std::popcount(mask) & 1 ? 1.0 / d : -1.0 / d;
        acc_q.add(sd * t * sum_w_[mask]);
        acc_0.add(sd);
        for (int j = 0; j < k_; ++j)
            if (!(mask >> j & 1)) per_product[static_cast<std::size_t>(j)].add(sd);
    }
    ChoiceDistribution dist;
    for (int j = 0; j < k_; ++j) {
        auto ju = static_cast<std::size_t>(j);
        double p = a_[ju] * per_product[ju].get();
        dist.p_product[members_[ju]] = std::clamp(p, 0.0, 1.0);
    }
    dist.p_opaque = std::clamp(acc_q.get(), 0.0, 1.0);
    dist.p_none = std::clamp(w0_ * acc_0.get(), 0.0, 1.0);
    return dist;
}

}  // namespace detail

ChoiceDistribution opq_choice_prob_exact(const MarketInstance& inst, const Assortment& S,
                                         double rho, int exact_cap) {
    check_opaque_pre(S, rho, exact_cap);
    if (rho > min_price_over(inst, S)) return trad_choice_prob(inst, S);
    return detail::OpaqueEvaluator(inst, S, exact_cap).distribution(rho);
}

double opq_revenue_exact(const MarketInstance& inst, const Assortment& S, double rho,
                         int exact_cap) {
    check_opaque_pre(S, rho, exact_cap);
    if (rho > min_price_over(inst, S)) return trad_revenue(inst, S);
    return detail::OpaqueEvaluator(inst, S, exact_cap).revenue(rho);
}

OpaqueQuote opq_quote_exact(const MarketInstance& inst, const Assortment& S, double rho,
                            int exact_cap) {
    check_opaque_pre(S, rho, exact_cap);
    OpaqueQuote q;
    q.rho = rho;
    q.mode = OpaqueQuote::Mode::exact;
    q.half_width = 0.0;
    if (rho > min_price_over(inst, S)) {
        q.revenue = trad_revenue(inst, S);
        q.distribution = trad_choice_prob(inst, S);
        return q;
    }
    detail::OpaqueEvaluator eval(inst, S, exact_cap);
    q.revenue = eval.revenue(rho);
    q.distribution = eval.distribution(rho);
    return q;
}

Decomposition uniform_price_decomposition(const MarketInstance& inst, const Assortment& S,
                                          double r, double rho, int exact_cap) {
    check_opaque_pre(S, rho, exact_cap);
    for (int i : S.members()) {
        double ri = inst.r()[static_cast<std::size_t>(i)];
        if (std::abs(ri - r) > 1e-12 * std::max(1.0, std::abs(r)))
            throw std::invalid_argument(
                "uniform_price_decomposition: price of product " + std::to_string(i + 1) +
                " differs from the uniform price r");
    }
    if (rho > r)
        throw std::invalid_argument("field 'rho': must satisfy rho <= r");

    std::vector<double> at_rho(inst.v().size(), rho);
    ChoiceDistribution trad_at_rho = detail::logit_probs(inst.v(), at_rho, S.members());
    double buy_prob = 0.0;
    for (const auto& [i, p] : trad_at_rho.p_product) buy_prob += p;

    detail::OpaqueEvaluator eval(inst, S, exact_cap);
    double p_opaque = eval.distribution(rho).p_opaque;

    Decomposition d;
    d.theta = buy_prob > 0.0 ? std::clamp(p_opaque / buy_prob, 0.0, 1.0) : 0.0;
    d.lhs = eval.revenue(rho);
    double rev_at_rho = detail::logit_revenue(inst.v(), at_rho, S.members());
    d.rhs = d.theta * rev_at_rho + (1.0 - d.theta) * trad_revenue(inst, S);
    return d;
}

}  // namespace opaque_mnl
