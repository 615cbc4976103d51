#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "ctk/image.hpp"

namespace ctk {

/// One additive rain streak layer: oriented anti-aliased line segments seeded
/// by a Poisson point count.
struct StreakLayerParams {
    double angle_deg = 20.0; // from vertical, in [-45, 45]
    double length = 12.0;    // pixels, >= 1
    double width = 1.5;      // pixels, >= 1
    double density = 2.0;    // streaks per kilo-pixel, > 0
    double intensity = 0.8;  // additive brightness, in (0, 1]
    uint64_t seed = 0;

    void validate() const;
};

/// Heavy-rain veiling model: transmission T = exp(-beta * depth).
struct VeilParams {
    std::array<double, 3> atmospheric_light{0.8, 0.8, 0.8}; // per channel, [0,1]
    double beta = 1.0;                                      // > 0
    ImageTensor depth;                                      // channels=1, unit range

    void validate() const;
};

enum class DepthKind { Ramp, Radial, Constant };

ImageTensor make_depth(DepthKind kind, int h, int w);

/// One rasterized streak: segment endpoints plus its peak brightness.
struct StreakSegment {
    double ax, ay, bx, by;
    double value; // intensity * per-streak jitter
};

/// The segments a layer rasterizes, in generation order (deterministic for a
/// fixed seed).
std::vector<StreakSegment> layer_segments(int h, int w, const StreakLayerParams& p);

/// Deterministic for a fixed seed: identical masks on every platform.
ImageTensor gen_streak_layer(int h, int w, const StreakLayerParams& p);

struct ModerateRain {
    ImageTensor rain;
    ImageTensor mask;
};

/// rain = clamp(clean + mask), mask = clamp(sum of layers); the gray mask is
/// added to every channel.
ModerateRain apply_moderate(const ImageTensor& clean, std::span<const StreakLayerParams> layers);

ImageTensor gen_transmission(const VeilParams& v);

struct HeavyRain {
    ImageTensor rain;
    ImageTensor mask;
    ImageTensor transmission;
};

/// rain = clamp(T*(clean + mask) + (1 - T)*A). With T identically 1 the
/// output bit-equals apply_moderate.
HeavyRain apply_heavy(const ImageTensor& clean, std::span<const StreakLayerParams> layers,
                      const VeilParams& v);

} // namespace ctk
