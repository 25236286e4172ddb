#pragma once

#include "opaque_mnl/rng.hpp"
#include "opaque_mnl/types.hpp"

namespace opaque_mnl {

/// Draw ranges for randomly generated market instances (property sweeps,
/// fuzz suites, approximation-ratio checks).
struct InstanceRange {
    int n_min = 1;
    int n_max = 6;
    double v_lo = -1.0;
    double v_hi = 3.0;
    double r_lo = 0.05;
    double r_hi = 5.0;
    bool uniform_prices = false;
};

/// Consumes draws from the stream; deterministic given the stream key.
MarketInstance random_instance(rng::Stream& stream, const InstanceRange& range);

/// Uniformly random nonempty subset of {0,...,n-1}.
Assortment random_nonempty_assortment(rng::Stream& stream, int n);

}  // namespace opaque_mnl
