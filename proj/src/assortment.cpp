#include "opaque_mnl/assortment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "opaque_mnl/traditional.hpp"

namespace opaque_mnl {

namespace {

struct LineSearchResult {
    double rho = 0.0;
    double revenue = 0.0;
    bool guard_disagreement = false;
};

template <typename F>
std::pair<double, double> golden_max(const F& f, double lo, double hi, double tol) {
    constexpr double kRatio = 0.6180339887498949;
    double c = hi - kRatio * (hi - lo);
    double d = lo + kRatio * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < 500 && hi - lo > tol; ++it) {
        if (fc >= fd) {  // ties shrink from the right, correct for flat tails
            hi = d;
            d = c;
            fd = fc;
            c = hi - kRatio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + kRatio * (hi - lo);
            fd = f(d);
        }
    }
    double mid = 0.5 * (lo + hi);
    return {mid, f(mid)};
}

LineSearchResult line_search(const MarketInstance& inst,
                             const detail::OpaqueEvaluator& eval, const Assortment& S,
                             double tol) {
    const double min_r = eval.min_price();
    auto f = [&eval](double rho) { return eval.revenue(rho); };

    LineSearchResult best;
    best.rho = min_r;
    best.revenue = trad_revenue(inst, S);  // endpoint, preferred on ties

    auto [full_rho, full_rev] = golden_max(f, 0.0, min_r, tol);

    constexpr int kGridPoints = 64;
    int arg = 0;
    double arg_rev = -std::numeric_limits<double>::infinity();
    auto grid_at = [min_r](int j) { return min_r * j / (kGridPoints - 1); };
    for (int j = 0; j < kGridPoints; ++j) {
        double rev = f(grid_at(j));
        if (rev > arg_rev) {
            arg_rev = rev;
            arg = j;
        }
    }
    auto [grid_rho, grid_rev] =
        golden_max(f, grid_at(std::max(0, arg - 1)),
                   grid_at(std::min(kGridPoints - 1, arg + 1)), tol);
    if (arg_rev > grid_rev) {
        grid_rho = grid_at(arg);
        grid_rev = arg_rev;
    }

    bool guard = std::abs(full_rev - grid_rev) > 1e-6;
    for (auto [rho, rev] : {std::pair{full_rho, full_rev}, std::pair{grid_rho, grid_rev}}) {
        if (rev > best.revenue) {
            best.rho = rho;
            best.revenue = rev;
        }
    }
    best.guard_disagreement = guard;
    return best;
}

bool better_solution(double rev_a, const std::vector<int>& members_a, double rev_b,
                     const std::vector<int>& members_b) {
    if (rev_a != rev_b) return rev_a > rev_b;
    if (members_a.size() != members_b.size()) return members_a.size() < members_b.size();
    return members_a < members_b;
}

AssortmentSolution finish_solution(const MarketInstance& inst, Assortment S,
                                   const LineSearchResult& ls, std::string method,
                                   std::uint64_t candidates, bool any_guard) {
    AssortmentSolution sol;
    double min_r = std::numeric_limits<double>::infinity();
    for (int i : S.members()) min_r = std::min(min_r, inst.r()[static_cast<std::size_t>(i)]);
    double trad = trad_revenue(inst, S);
    sol.assortment = std::move(S);
    sol.opaque_price = ls.rho;
    sol.revenue = ls.revenue;
    sol.opaque_offered = ls.rho < min_r - 1e-9 && ls.revenue > trad + 1e-9;
    sol.method = std::move(method);
    sol.candidates_evaluated = candidates;
    sol.guard_disagreement = any_guard;
    return sol;
}

Assortment mask_to_assortment(std::uint32_t mask, int n) {
    std::vector<int> members;
    members.reserve(static_cast<std::size_t>(std::popcount(mask)));
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1) members.push_back(i);
    return Assortment(std::move(members), n);
}

}  // namespace

OpaqueQuote optimize_opaque_price(const MarketInstance& inst, const Assortment& S,
                                  double tol, int exact_cap) {
    if (!(tol > 0.0))
        throw std::invalid_argument("field 'tol': must be > 0");
    detail::OpaqueEvaluator eval(inst, S, exact_cap);
    LineSearchResult ls = line_search(inst, eval, S, tol);
    OpaqueQuote q;
    q.rho = ls.rho;
    q.revenue = ls.revenue;
    q.distribution = eval.distribution(ls.rho);
    q.mode = OpaqueQuote::Mode::exact;
    q.half_width = 0.0;
    q.guard_disagreement = ls.guard_disagreement;
    return q;
}

RevenueCurve revenue_curve(const MarketInstance& inst, const Assortment& S, int points,
                           int exact_cap) {
    if (points < 2)
        throw std::invalid_argument("field 'points': must be >= 2");
    detail::OpaqueEvaluator eval(inst, S, exact_cap);
    const double min_r = eval.min_price();
    RevenueCurve curve;
    curve.assortment = S;
    curve.points.reserve(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
        double rho = j == points - 1 ? min_r : min_r * j / (points - 1);
        curve.points.emplace_back(rho, eval.revenue(rho));
    }
    return curve;
}

AssortmentSolution brute_force_assortment(const MarketInstance& inst, int jobs,
                                          double tol, int exact_cap) {
    const int n = inst.n();
    if (n > kBruteForceCap)
        throw std::invalid_argument("brute_force_assortment: n = " + std::to_string(n) +
                                    " exceeds the cap of " +
                                    std::to_string(kBruteForceCap));
    const std::uint32_t count = (std::uint32_t{1} << n) - 1;
    std::vector<LineSearchResult> results(count);
    auto work = [&](std::uint32_t idx) {
        Assortment S = mask_to_assortment(idx + 1, n);
        detail::OpaqueEvaluator eval(inst, S, exact_cap);
        results[idx] = line_search(inst, eval, S, tol);
    };

    int workers = static_cast<int>(std::min<std::uint32_t>(
        static_cast<std::uint32_t>(std::max(jobs, 1)), count));
    if (workers <= 1) {
        for (std::uint32_t idx = 0; idx < count; ++idx) work(idx);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::uint32_t idx = next.fetch_add(1); idx < count;
                     idx = next.fetch_add(1))
                    work(idx);
            });
        for (auto& th : pool) th.join();
    }

    std::uint32_t best_idx = 0;
    Assortment best_S = mask_to_assortment(1, n);
    bool any_guard = results[0].guard_disagreement;
    for (std::uint32_t idx = 1; idx < count; ++idx) {
        any_guard = any_guard || results[idx].guard_disagreement;
        Assortment S = mask_to_assortment(idx + 1, n);
        if (better_solution(results[idx].revenue, S.members(),
                            results[best_idx].revenue, best_S.members())) {
            best_idx = idx;
            best_S = std::move(S);
        }
    }
    return finish_solution(inst, std::move(best_S), results[best_idx], "brute-force",
                           count, any_guard);
}

AssortmentSolution nested_by_valuation(const MarketInstance& inst, double tol,
                                       int exact_cap) {
    const int n = inst.n();
    const double r0 = inst.r()[0];
    for (double ri : inst.r())
        if (std::abs(ri - r0) > 1e-12 * std::max(1.0, std::abs(r0)))
            throw std::invalid_argument("nested_by_valuation requires uniform prices");

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&inst](int a, int b) {
        return inst.v()[static_cast<std::size_t>(a)] > inst.v()[static_cast<std::size_t>(b)];
    });

    bool have_best = false;
    LineSearchResult best_ls;
    Assortment best_S;
    bool any_guard = false;
    for (int k = 1; k <= n; ++k) {
        Assortment S(std::vector<int>(order.begin(), order.begin() + k), n);
        detail::OpaqueEvaluator eval(inst, S, exact_cap);
        LineSearchResult ls = line_search(inst, eval, S, tol);
        any_guard = any_guard || ls.guard_disagreement;
        if (!have_best || better_solution(ls.revenue, S.members(), best_ls.revenue,
                                          best_S.members())) {
            have_best = true;
            best_ls = ls;
            best_S = std::move(S);
        }
    }
    return finish_solution(inst, std::move(best_S), best_ls, "nested-by-valuation",
                           static_cast<std::uint64_t>(n), any_guard);
}

AssortmentSolution nrv_heuristic(const MarketInstance& inst, double tol, int exact_cap) {
    const int n = inst.n();
    std::vector<int> by_price(static_cast<std::size_t>(n));
    std::iota(by_price.begin(), by_price.end(), 0);
    std::vector<int> by_valuation = by_price;
    std::stable_sort(by_price.begin(), by_price.end(), [&inst](int a, int b) {
        return inst.r()[static_cast<std::size_t>(a)] > inst.r()[static_cast<std::size_t>(b)];
    });
    std::stable_sort(by_valuation.begin(), by_valuation.end(), [&inst](int a, int b) {
        return inst.v()[static_cast<std::size_t>(a)] > inst.v()[static_cast<std::size_t>(b)];
    });

    std::set<std::vector<int>> candidates;
    for (int i = 1; i <= n; ++i) {
        std::vector<int> top_r(by_price.begin(), by_price.begin() + i);
        std::sort(top_r.begin(), top_r.end());
        for (int j = 1; j <= n; ++j) {
            std::vector<int> top_v(by_valuation.begin(), by_valuation.begin() + j);
            std::sort(top_v.begin(), top_v.end());
            std::vector<int> common;
            std::set_intersection(top_r.begin(), top_r.end(), top_v.begin(), top_v.end(),
                                  std::back_inserter(common));
            if (!common.empty()) candidates.insert(std::move(common));
        }
    }
    // The intersections need not contain every singleton; insert them all so
    // the best single product is always a candidate.
    for (int i = 0; i < n; ++i) candidates.insert({i});

    bool have_best = false;
    LineSearchResult best_ls;
    Assortment best_S;
    bool any_guard = false;
    for (const auto& members : candidates) {
        Assortment S(members, n);
        detail::OpaqueEvaluator eval(inst, S, exact_cap);
        LineSearchResult ls = line_search(inst, eval, S, tol);
        any_guard = any_guard || ls.guard_disagreement;
        if (!have_best || better_solution(ls.revenue, S.members(), best_ls.revenue,
                                          best_S.members())) {
            have_best = true;
            best_ls = ls;
            best_S = std::move(S);
        }
    }
    return finish_solution(inst, std::move(best_S), best_ls, "nrv",
                           candidates.size(), any_guard);
}

ApproximationReport approximation_report(const MarketInstance& inst, int jobs, double tol,
                                         int exact_cap) {
    ApproximationReport report;
    report.opt = brute_force_assortment(inst, jobs, tol, exact_cap);
    report.nrv = nrv_heuristic(inst, tol, exact_cap);
    report.gap_percent = 100.0 * (1.0 - report.nrv.revenue / report.opt.revenue);
    return report;
}

}  // namespace opaque_mnl
