#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace opaque_mnl::rng {

// Counter-based generator: output i of stream k is mix64(k + (i+1)*gamma).
// A sample's draws depend only on (seed, sample index), so work can be
// partitioned across threads arbitrarily without changing any draw.

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed + (index + 1) * kGamma);
}

inline std::uint64_t bits_at(std::uint64_t key, std::uint64_t counter) {
    return mix64(key + (counter + 1) * kGamma);
}

/// Uniform on the open interval (0,1): never 0 or 1, safe under log(-log(u)).
inline double to_open_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1p-53;
}

inline double to_gumbel(std::uint64_t bits) {
    return -std::log(-std::log(to_open_unit(bits)));
}

/// One keyed stream with a running counter.
struct Stream {
    std::uint64_t key;
    std::uint64_t counter = 0;

    explicit Stream(std::uint64_t seed, std::uint64_t index)
        : key(substream(seed, index)) {}

    double uniform() { return to_open_unit(bits_at(key, counter++)); }

    double gumbel() { return -std::log(-std::log(uniform())); }

    /// Box-Muller pair of independent standard normals.
    void normal_pair(double& z1, double& z2) {
        double u1 = uniform();
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        z1 = radius * std::cos(angle);
        z2 = radius * std::sin(angle);
    }
};

}  // namespace opaque_mnl::rng
