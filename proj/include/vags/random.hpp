#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "vags/vecmath.hpp"

namespace vags {

// Counter-based normal generator: every draw is a pure function of
// (seed, stream, index), so replays and parallel runs agree bit for bit
// without sharing generator state.
class CounterNormal {
public:
    constexpr CounterNormal(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

    /// Standard normal draw at position `index` of this stream.
    double operator()(std::uint64_t index) const {
        // Box-Muller over two independent uniforms; use the cosine branch only
        // so each index maps to exactly one draw.
        const double u1 = uniform_open(2 * index);
        const double u2 = uniform_open(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform on (0, 1).
    double uniform_open(std::uint64_t counter) const {
        const std::uint64_t bits = mix(key_ + mix(counter));
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    LatentVector vector(Eigen::Index dimension, std::uint64_t offset = 0) const {
        LatentVector out(dimension);
        for (Eigen::Index k = 0; k < dimension; ++k)
            out[k] = (*this)(offset + static_cast<std::uint64_t>(k));
        return out;
    }

    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t key_;
};

} // namespace vags
