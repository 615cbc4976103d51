#pragma once

#include <cstdint>

namespace ctk {

/// splitmix64 finalizer: the counter-based core of every stochastic component.
/// Pure 64-bit integer arithmetic, so any language reproduces the streams.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: value i of stream s under seed k is a pure
/// function mix64 applied to a (seed, stream, counter) combination. No state
/// advances, so draws can be made in any order or in parallel.
class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream)
        : key_(mix64(mix64(seed) ^ mix64(~stream))) {}

    uint64_t bits(uint64_t counter) const { return mix64(key_ + counter * 0x9e3779b97f4a7c15ULL); }

    /// Uniform in [0, 1) with 53 random bits; exact dyadic rational.
    double uniform01(uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

private:
    uint64_t key_;
};

namespace detmath {

/// exp(-x) for x >= 0 via (1/e)^floor(x) * series(frac): a fixed IEEE
/// operation sequence, bit-reproducible across conforming platforms.
double exp_neg(double x);

/// sin/cos for |x| <= pi/4 by fixed-order Taylor series (same rationale).
double sin_small(double x);
double cos_small(double x);

} // namespace detmath

} // namespace ctk
