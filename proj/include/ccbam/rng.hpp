#ifndef CCBAM_RNG_HPP
#define CCBAM_RNG_HPP

#include <cstdint>
#include <random>

namespace ccbam {

using Rng = std::mt19937_64;

// Uniform in [0, 1). Hand-rolled from raw bits so draws are identical across
// standard-library implementations.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Standard normal via Box-Muller on the deterministic uniform above.
inline double normal(Rng& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

}  // namespace ccbam

#endif
