#include "opaque_mnl/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opaque_mnl/instance_rng.hpp"
#include "opaque_mnl/traditional.hpp"

namespace opaque_mnl {

namespace {

double uniform_revenue(const MarketInstance& inst, const Assortment& S, double price) {
    std::vector<double> prices(inst.v().size(), price);
    return detail::logit_revenue(inst.v(), prices, S.members());
}

MarketInstance repriced(const MarketInstance& inst, const Assortment& S,
                        const std::vector<double>& r_S) {
    if (r_S.size() != S.members().size())
        throw std::invalid_argument("price vector length does not match assortment size");
    return inst.with_prices(S.members(), r_S);
}

}  // namespace

PricingSolution optimize_prices(const MarketInstance& inst, const Assortment& S) {
    if (S.empty())
        throw std::invalid_argument("optimize_prices requires a nonempty assortment");
    PricingSolution sol;
    sol.assortment = S;
    sol.uniform_price = optimal_uniform_price(inst, S);
    sol.opaque_price = sol.uniform_price;
    sol.revenue = uniform_revenue(inst, S, sol.uniform_price);
    if (std::abs(sol.revenue - (sol.uniform_price - 1.0)) > 1e-9)
        throw std::runtime_error(
            "optimize_prices: revenue identity r* - 1 violated beyond 1e-9");
    return sol;
}

double verify_no_opaque_gain(const MarketInstance& inst, const Assortment& S,
                             const std::vector<double>& r_S, double rho, int exact_cap) {
    if (S.empty())
        throw std::invalid_argument("verify_no_opaque_gain requires a nonempty assortment");
    double best = uniform_revenue(inst, S, optimal_uniform_price(inst, S));
    double opq = opq_revenue_exact(repriced(inst, S, r_S), S, rho, exact_cap);
    return best - opq;
}

bool check_case_i_dominance(const MarketInstance& inst, const Assortment& S,
                            const std::vector<double>& r_S, double rho, int exact_cap) {
    MarketInstance priced = repriced(inst, S, r_S);
    double rstar = optimal_uniform_price(inst, S);
    const double slack = 1e-12 * std::max(1.0, rstar);
    if (!(rho <= rstar + slack))
        throw std::invalid_argument("check_case_i_dominance requires rho <= r*");
    for (double ri : r_S)
        if (!(ri <= rstar + slack))
            throw std::invalid_argument("check_case_i_dominance requires r_i <= r*");
    double trad = trad_revenue(priced, S);
    double opq = opq_revenue_exact(priced, S, rho, exact_cap);
    return trad >= opq - 1e-9;
}

bool check_price_monotonicity(const MarketInstance& inst, const Assortment& S, int i,
                              double rho, std::vector<double> grid, int exact_cap) {
    if (!S.contains(i))
        throw std::invalid_argument("check_price_monotonicity: product not in assortment");
    double threshold = std::max(optimal_uniform_price(inst, S), rho);
    std::erase_if(grid, [threshold](double g) { return !(g > threshold); });
    if (grid.empty())
        throw std::invalid_argument(
            "check_price_monotonicity: grid entirely at or below max(r*, rho)");
    std::sort(grid.begin(), grid.end());
    double prev = std::numeric_limits<double>::infinity();
    for (double g : grid) {
        double rev = opq_revenue_exact(inst.with_prices({i}, {g}), S, rho, exact_cap);
        if (rev > prev + 1e-9) return false;
        prev = rev;
    }
    return true;
}

SweepReport no_opaque_gain_sweep(std::uint64_t trials, std::uint64_t seed, int n_max) {
    InstanceRange range{.n_min = 1, .n_max = n_max};
    SweepReport report;
    report.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        rng::Stream st(seed, t);
        MarketInstance inst = random_instance(st, range);
        Assortment S = random_nonempty_assortment(st, inst.n());
        std::vector<double> r_S(S.members().size());
        double min_r = range.r_hi;
        for (auto& x : r_S) {
            x = range.r_lo + st.uniform() * (range.r_hi - range.r_lo);
            min_r = std::min(min_r, x);
        }
        // Cover both the opaque-active region and the degenerate rho > min r.
        double rho = st.uniform() * 1.5 * min_r;
        double gap = verify_no_opaque_gain(inst, S, r_S, rho);
        if (gap < report.worst) report.worst = gap;
        if (gap < -1e-9) ++report.violations;
    }
    return report;
}

SweepReport dominance_sweep(std::uint64_t trials, std::uint64_t seed, int n_max) {
    InstanceRange range{.n_min = 1, .n_max = n_max};
    SweepReport report;
    report.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        rng::Stream st(seed, t);
        MarketInstance inst = random_instance(st, range);
        Assortment S = random_nonempty_assortment(st, inst.n());
        double rstar = optimal_uniform_price(inst, S);
        std::vector<double> r_S(S.members().size());
        for (auto& x : r_S) x = rstar * (0.02 + 0.98 * st.uniform());
        double rho = st.uniform() * rstar;
        MarketInstance priced = inst.with_prices(S.members(), r_S);
        double gap = trad_revenue(priced, S) - opq_revenue_exact(priced, S, rho);
        if (gap < report.worst) report.worst = gap;
        if (!check_case_i_dominance(inst, S, r_S, rho)) ++report.violations;
    }
    return report;
}

SweepReport monotonicity_sweep(std::uint64_t trials, std::uint64_t seed, int n_max) {
    InstanceRange range{.n_min = 1, .n_max = n_max};
    SweepReport report;
    report.trials = trials;
    for (std::uint64_t t = 0; t < trials; ++t) {
        rng::Stream st(seed, t);
        MarketInstance inst = random_instance(st, range);
        Assortment S = random_nonempty_assortment(st, inst.n());
        const auto& members = S.members();
        int i = members[std::min<std::size_t>(members.size() - 1,
                                              static_cast<std::size_t>(
                                                  st.uniform() * members.size()))];
        double rho = st.uniform() * 2.0;
        double threshold = std::max(optimal_uniform_price(inst, S), rho);
        std::vector<double> grid(20);
        for (int j = 0; j < 20; ++j) grid[static_cast<std::size_t>(j)] = threshold + 0.25 * (j + 1);

        double prev = std::numeric_limits<double>::infinity();
        double largest_increase = 0.0;
        for (double g : grid) {
            double rev = opq_revenue_exact(inst.with_prices({i}, {g}), S, rho);
            if (rev - prev > largest_increase) largest_increase = rev - prev;
            prev = rev;
        }
        if (largest_increase > report.worst) report.worst = largest_increase;
        if (!check_price_monotonicity(inst, S, i, rho, grid)) ++report.violations;
    }
    return report;
}

}  // namespace opaque_mnl
