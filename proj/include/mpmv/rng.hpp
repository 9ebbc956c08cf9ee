#pragma once

#include <cstdint>

namespace mpmv::rng {

/// splitmix64 finalizer; full-period bijective mix of the input word.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stateless hash of a (seed, path, period, component) counter. Noise is
/// a pure function of these four words, so simulations are reproducible
/// and independent of evaluation order.
inline uint64_t counter_hash(uint64_t seed, uint64_t path, uint64_t period, uint64_t component) {
    uint64_t h = mix64(seed ^ 0x8C9B7D4F3A2E1650ULL);
    h = mix64(h ^ path);
    h = mix64(h ^ period);
    h = mix64(h ^ component);
    return h;
}

/// Uniform draw strictly inside (0, 1) from a hashed counter.
inline double uniform01(uint64_t h) {
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

/// Inverse of the standard normal CDF. Rational initial guess refined by
/// one Halley step against erfc, accurate to close to machine precision
/// over (0, 1).
double inverse_normal_cdf(double u);

/// Standard normal draw keyed by (seed, path, period, component).
inline double normal(uint64_t seed, uint64_t path, uint64_t period, uint64_t component) {
    return inverse_normal_cdf(uniform01(counter_hash(seed, path, period, component)));
}

}  // namespace mpmv::rng
