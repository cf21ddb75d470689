#pragma once

#include <cstdint>
#include <random>

namespace pnrpa {

/// The generator behind every stochastic choice. The conversions below are
/// written out by hand because the standard distributions are allowed to
/// differ between library implementations.
using Rng = std::mt19937_64;

inline constexpr const char* kRngName = "mt19937_64";

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n) by rejection; n must be positive.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - Rng::max() % n;
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    return draw % n;
}

}  // namespace pnrpa
