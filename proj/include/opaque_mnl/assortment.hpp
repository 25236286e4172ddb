#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "opaque_mnl/opaque.hpp"
#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Brute-force enumeration is limited to this many products (2^n - 1
/// assortments, each with a full line search).
inline constexpr int kBruteForceCap = 16;

/// An assortment with its optimized opaque price. opaque_offered applies the
/// counting convention: the opaque product is part of the solution only when
/// its price is strictly below the cheapest offered product (by more than
/// 1e-9) and it strictly improves on the traditional revenue (by more than
/// 1e-9).
struct AssortmentSolution {
    Assortment assortment;
    double opaque_price = 0.0;
    double revenue = 0.0;
    bool opaque_offered = false;
    std::string method;  // "brute-force" | "nested-by-valuation" | "nrv"
    std::uint64_t candidates_evaluated = 0;
    bool guard_disagreement = false;
};

/// Exact revenue sampled along an opaque price grid for one assortment.
struct RevenueCurve {
    Assortment assortment;
    std::vector<std::pair<double, double>> points;  // (rho, revenue), rho increasing
};

/// Maximizes the exact opaque revenue over rho in [0, min_{i in S} r_i].
/// The revenue is assumed unimodal in rho; the search runs golden-section on
/// the full interval, plus a 64-point coarse grid refined by a second
/// golden-section as a guard against undetected multimodality. The endpoint
/// rho = min r (traditional revenue) is always compared and preferred on
/// ties. If the two search strategies disagree by more than 1e-6 in revenue
/// the better one is returned with guard_disagreement set. tol is the bracket
/// width on rho at which the search stops.
OpaqueQuote optimize_opaque_price(const MarketInstance& inst, const Assortment& S,
                                  double tol = 1e-6, int exact_cap = kDefaultExactCap);

/// Exact revenue at `points` evenly spaced opaque prices spanning
/// [0, min_{i in S} r_i]; points >= 2.
RevenueCurve revenue_curve(const MarketInstance& inst, const Assortment& S, int points,
                           int exact_cap = kDefaultExactCap);

/// Optimal assortment by enumerating every nonempty subset (n <= 16) with a
/// line search per subset. Ties go to smaller cardinality, then
/// lexicographically smaller member list. jobs > 1 evaluates candidates in
/// parallel; the argmax reduction is schedule-independent.
AssortmentSolution brute_force_assortment(const MarketInstance& inst, int jobs = 1,
                                          double tol = 1e-6,
                                          int exact_cap = kDefaultExactCap);

/// Optimal assortment under uniform prices: with all r_i equal, some prefix
/// of the products sorted by descending valuation is optimal, so only the n
/// prefixes are evaluated. Throws if prices are not uniform.
AssortmentSolution nested_by_valuation(const MarketInstance& inst, double tol = 1e-6,
                                       int exact_cap = kDefaultExactCap);

/// NRV heuristic: candidates are the intersections of top-i-by-price and
/// top-j-by-valuation prefixes (stable sorts, original-index tiebreak) plus
/// every singleton, deduplicated; the best candidate is returned. Optimal for
/// n = 2 and a 1/2-approximation in general.
AssortmentSolution nrv_heuristic(const MarketInstance& inst, double tol = 1e-6,
                                 int exact_cap = kDefaultExactCap);

/// Brute-force optimum, NRV solution, and the relative revenue gap
/// 100 * (1 - nrv/opt) in percent.
struct ApproximationReport {
    AssortmentSolution opt;
    AssortmentSolution nrv;
    double gap_percent = 0.0;
};

ApproximationReport approximation_report(const MarketInstance& inst, int jobs = 1,
                                         double tol = 1e-6,
                                         int exact_cap = kDefaultExactCap);

}  // namespace opaque_mnl
