#pragma once

#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Logit purchase probabilities when only the traditional products of S are
/// offered at the instance prices:
///   p_product[i] = e^{v_i - r_i} / (1 + sum_{j in S} e^{v_j - r_j}).
/// The empty assortment is legal and yields p_none = 1.
ChoiceDistribution trad_choice_prob(const MarketInstance& inst, const Assortment& S);

/// Expected revenue sum_{i in S} r_i * p_product[i]; 0 for empty S.
double trad_revenue(const MarketInstance& inst, const Assortment& S);

/// Price vector over S (ascending member order) in which every product of I
/// is repriced at rho and the rest keep their instance prices.
/// Throws if I is not a subset of S or rho < 0.
std::vector<double> substituted_prices(const MarketInstance& inst, const Assortment& S,
                                       const Assortment& I, double rho);

/// The unique root r* > 1 of r = 1 + A e^{-r} with A = sum_{i in S} e^{v_i}:
/// the revenue-maximizing uniform price for S. Newton iteration with a
/// bisection-safeguarded bracket; residual |r* - 1 - A e^{-r*}| <= 1e-10.
double optimal_uniform_price(const MarketInstance& inst, const Assortment& S);

namespace detail {

/// log sum_{i in members} e^{v_i}, computed with a max shift.
double logsumexp_v(const std::vector<double>& v, const std::vector<int>& members);

/// Logit probabilities at arbitrary finite prices (no positivity requirement,
/// so repriced vectors with rho = 0 are evaluable).
ChoiceDistribution logit_probs(const std::vector<double>& v,
                               const std::vector<double>& prices,
                               const std::vector<int>& members);

/// Expected revenue of the same model.
double logit_revenue(const std::vector<double>& v, const std::vector<double>& prices,
                     const std::vector<int>& members);

}  // namespace detail

}  // namespace opaque_mnl
