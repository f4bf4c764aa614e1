#pragma once

// Counter-based pseudo-random numbers: draw i of a stream is a pure
// function of (seed, i), so runs are reproducible under any sharding of
// the index range. The generator is the splitmix64 output function
// evaluated at seed + (i+1)*gamma.

#include <cstdint>

#include "normal.hpp"

namespace mdcal {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27; z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

} // namespace detail

struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t word(std::uint64_t i) const {
        return detail::mix64(seed + (i + 1) * detail::golden_gamma);
    }

    // Uniform on the open interval (0,1); never returns an endpoint.
    double u01(std::uint64_t i) const {
        return (static_cast<double>(word(i) >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal(std::uint64_t i) const { return norm_ppf(u01(i)); }

    bool bernoulli(std::uint64_t i, double p) const { return u01(i) < p; }
};

// Derive an independent stream seed, e.g. one per replicate block.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return detail::mix64(seed ^ detail::mix64(stream + 0x632BE59BD9B4E019ull));
}

} // namespace mdcal
