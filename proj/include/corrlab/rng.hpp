// Seeded randomness helpers. std::uniform_real_distribution is
// implementation-defined, so deviates are derived from raw mt19937_64 words
// to keep seeded runs identical across standard libraries.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace corrlab {

// Uniform deviate in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace corrlab
