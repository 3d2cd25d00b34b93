#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace jcarray {

// Counter-based random draws: every variate is a pure function of
// (master seed, realization, site, attempt, lane), so parallel and serial
// schedules produce bit-identical streams.
namespace rng {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h + 0x9E3779B97F4A7C15ull + v);
}

// lane 0 maps to (0, 1] (safe under log), lane 1 to [0, 1).
inline double uniform01(std::uint64_t master, std::uint64_t realization, std::uint64_t site,
                        std::uint64_t attempt, std::uint64_t lane) {
    const std::uint64_t k =
        combine(combine(combine(combine(master, realization), site), attempt), lane);
    const std::uint64_t mantissa = (k >> 11) + (lane == 0 ? 1u : 0u);
    return static_cast<double>(mantissa) * 0x1.0p-53;
}

// Box-Muller, cosine branch.
inline double standard_normal(std::uint64_t master, std::uint64_t realization, std::uint64_t site,
                              std::uint64_t attempt) {
    const double u1 = uniform01(master, realization, site, attempt, 0);
    const double u2 = uniform01(master, realization, site, attempt, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace rng
} // namespace jcarray
