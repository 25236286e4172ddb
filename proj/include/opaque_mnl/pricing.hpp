#pragma once

#include <cstdint>
#include <vector>

#include "opaque_mnl/opaque.hpp"
#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Solution of the joint price optimization over (r_S, rho): uniform pricing
/// at the fixed point r*_S is optimal, and offering the opaque product adds
/// nothing, so opaque_price == uniform_price and revenue == r*_S - 1.
struct PricingSolution {
    double uniform_price = 0.0;
    double opaque_price = 0.0;
    double revenue = 0.0;
    Assortment assortment;
};

/// Computes r*_S and the revenue at uniform price r*_S, which the fixed-point
/// equation reduces to r*_S - 1 (checked to 1e-9).
PricingSolution optimize_prices(const MarketInstance& inst, const Assortment& S);

/// Signed optimality gap Rev(Trad at uniform r*) - Rev(Opq at (r_S, rho)).
/// Uniform-pricing optimality states this is >= 0 for every price vector r_S
/// over S and every opaque price rho; returned signed so sweeps can assert
/// nonnegativity up to numerical slack. r_S is given in ascending member
/// order of S.
double verify_no_opaque_gain(const MarketInstance& inst, const Assortment& S,
                             const std::vector<double>& r_S, double rho,
                             int exact_cap = kDefaultExactCap);

/// Dominance of the plain traditional model when everything is priced at or
/// below r*_S: requires rho <= r*_S and r_i <= r*_S for all i in S, and
/// returns whether Rev(Trad(S, r_S)) >= Rev(Opq(S, r_S, rho)) - 1e-9.
bool check_case_i_dominance(const MarketInstance& inst, const Assortment& S,
                            const std::vector<double>& r_S, double rho,
                            int exact_cap = kDefaultExactCap);

/// Opaque revenue as a function of a single product price r_i is
/// non-increasing once r_i > max(r*_S, rho). Evaluates the revenue along the
/// grid values of r_i strictly above that threshold and returns whether the
/// sequence is non-increasing up to 1e-9 slack. Throws if the grid lies
/// entirely at or below the threshold.
bool check_price_monotonicity(const MarketInstance& inst, const Assortment& S, int i,
                              double rho, std::vector<double> grid,
                              int exact_cap = kDefaultExactCap);

/// Outcome of one randomized falsification sweep.
struct SweepReport {
    std::uint64_t trials = 0;
    std::uint64_t violations = 0;
    double worst = 0.0;  // most negative gap / largest increase observed
};

/// verify_no_opaque_gain over random (instance, r_S, rho) draws with
/// n <= n_max; a violation is a gap below -1e-9.
SweepReport no_opaque_gain_sweep(std::uint64_t trials, std::uint64_t seed, int n_max = 6);

/// check_case_i_dominance over random draws satisfying its preconditions.
SweepReport dominance_sweep(std::uint64_t trials, std::uint64_t seed, int n_max = 6);

/// check_price_monotonicity over random draws with 20-point grids.
SweepReport monotonicity_sweep(std::uint64_t trials, std::uint64_t seed, int n_max = 6);

}  // namespace opaque_mnl
