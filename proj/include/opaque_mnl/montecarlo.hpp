#pragma once

#include <cstdint>
#include <optional>

#include "opaque_mnl/opaque.hpp"
#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Monte-Carlo configuration: either a fixed sample count or an (epsilon,
/// delta) accuracy target from which the Hoeffding sample count is derived.
/// Exactly one of the two must be set.
struct McConfig {
    std::optional<std::uint64_t> samples;
    std::optional<double> epsilon;
    std::optional<double> delta;
    std::uint64_t seed = 0;
    int jobs = 1;

    static McConfig with_samples(std::uint64_t t, std::uint64_t seed, int jobs = 1);
    static McConfig with_tolerance(double epsilon, double delta, std::uint64_t seed,
                                   int jobs = 1);

    /// Throws std::invalid_argument on an inconsistent configuration.
    void validate() const;
};

enum class ChosenOption { product, opaque, none };

struct SampledChoice {
    ChosenOption option = ChosenOption::none;
    int product = -1;  // zero-based, -1 unless option == product
    double revenue = 0.0;
};

/// One simulated customer. Draws n+1 i.i.d. standard Gumbel noises (outside
/// option plus every product of the instance) keyed by (seed, sample_index),
/// then picks the utility-maximizing option among no-purchase, the products
/// of S, and the opaque product valued at the minimum realized valuation over
/// S minus rho. Exact utility ties go to traditional products (lowest index
/// first), which keeps the opaque share continuous as rho crosses min r.
SampledChoice sample_choice(const MarketInstance& inst, const Assortment& S, double rho,
                            std::uint64_t seed, std::uint64_t sample_index);

/// Hoeffding sample count ceil(r_max^2 * ln(2/delta) / (2 epsilon^2)),
/// sufficient for |estimate - revenue| <= epsilon with probability >= 1-delta
/// when per-sample revenue lies in [0, r_max].
std::uint64_t required_samples(double r_max, double epsilon, double delta);

/// Sample-mean revenue estimate over T draws; the distribution fields are the
/// empirical choice frequencies. r_max is taken over all products of the
/// instance. half_width is epsilon when (epsilon, delta) are given, otherwise
/// the 95%-confidence Hoeffding width for the given T. The result is
/// bit-identical for a fixed seed regardless of cfg.jobs: samples are
/// processed in fixed-size chunks and chunk results are combined in index
/// order.
OpaqueQuote opq_revenue_mc(const MarketInstance& inst, const Assortment& S, double rho,
                           const McConfig& cfg);

}  // namespace opaque_mnl
