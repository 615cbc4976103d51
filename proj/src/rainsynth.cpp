#include "ctk/rainsynth.hpp"

#include <algorithm>
#include <cmath>

#include "ctk/rng.hpp"

namespace ctk {
namespace {

// RNG stream ids within a layer seed
constexpr uint64_t kStreamPoisson = 0;
constexpr uint64_t kStreamStreak = 1;

// Knuth Poisson sampling on sub-intensities small enough that the uniform
// product stays far from underflow; the chunk sum is still Poisson(lambda).
int poisson_count(double lambda, const CounterRng& rng) {
    constexpr double kChunk = 12.0;
    const int chunks = std::max(1, static_cast<int>(std::ceil(lambda / kChunk)));
    const double sub = lambda / chunks;
    const double threshold = detmath::exp_neg(sub);
    uint64_t counter = 0;
    long long total = 0;
    for (int c = 0; c < chunks; ++c) {
        double product = 1.0;
        int k = -1;
        do {
            product *= rng.uniform01(counter++);
            ++k;
        } while (product > threshold);
        total += k;
    }
    return static_cast<int>(std::min<long long>(total, 1 << 24));
}

double point_segment_dist(double qx, double qy, double ax, double ay, double bx, double by) {
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((qx - ax) * vx + (qy - ay) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = qx - (ax + t * vx), dy = qy - (ay + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

// Layer sum in list order, clamped; shared by both rain models so the
// degenerate heavy case reproduces the moderate output bit for bit.
ImageTensor build_mask(int h, int w, std::span<const StreakLayerParams> layers) {
    ImageTensor mask(h, w, 1);
    for (const StreakLayerParams& p : layers) {
        const ImageTensor layer = gen_streak_layer(h, w, p);
        for (size_t i = 0; i < mask.size(); ++i) mask.data()[i] += layer.data()[i];
    }
    for (double& v : mask.data()) v = clamp01(v);
    return mask;
}

} // namespace

void StreakLayerParams::validate() const {
    if (angle_deg < -45.0 || angle_deg > 45.0)
        throw ConfigError("streak angle must be in [-45, 45] degrees");
    if (length < 1.0) throw ConfigError("streak length must be >= 1 pixel");
    if (width < 1.0) throw ConfigError("streak width must be >= 1 pixel");
    if (!(density > 0.0)) throw ConfigError("streak density must be positive");
    if (!(intensity > 0.0) || intensity > 1.0)
        throw ConfigError("streak intensity must be in (0, 1]");
}

void VeilParams::validate() const {
    for (double a : atmospheric_light)
        if (a < 0.0 || a > 1.0) throw ConfigError("atmospheric light must be in [0, 1]");
    if (beta < 0.0) throw ConfigError("beta must be nonnegative");
    if (depth.channels() != 1) throw ShapeError("depth map must be single-channel");
    for (double d : depth.data())
        if (!(d >= 0.0) || d > 1.0) throw ConfigError("depth samples must be in [0, 1]");
}

ImageTensor make_depth(DepthKind kind, int h, int w) {
    ImageTensor depth(h, w, 1);
    switch (kind) {
    case DepthKind::Ramp:
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) depth.at(y, x) = h > 1 ? static_cast<double>(y) / (h - 1) : 0.0;
        break;
    case DepthKind::Radial: {
        const double cy = (h - 1) / 2.0, cx = (w - 1) / 2.0;
        const double rmax = std::sqrt(cy * cy + cx * cx);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                depth.at(y, x) = rmax > 0.0 ? std::sqrt((y - cy) * (y - cy) + (x - cx) * (x - cx)) / rmax : 0.0;
        break;
    }
    case DepthKind::Constant:
        for (double& v : depth.data()) v = 1.0;
        break;
    }
    return depth;
}

std::vector<StreakSegment> layer_segments(int h, int w, const StreakLayerParams& p) {
    p.validate();
    if (h < 1 || w < 1) throw ShapeError("degenerate raster dims");

    const CounterRng pois(p.seed, kStreamPoisson);
    const CounterRng attr(p.seed, kStreamStreak);
    const double lambda = p.density * h * w / 1000.0;
    const int count = poisson_count(lambda, pois);

    const double rad = p.angle_deg * (M_PI / 180.0);
    const double ux = detmath::sin_small(rad); // angle measured from vertical
    const double uy = detmath::cos_small(rad);
    const double half_len = p.length / 2.0;

    std::vector<StreakSegment> segments;
    segments.reserve(count);
    for (int k = 0; k < count; ++k) {
        const uint64_t base = static_cast<uint64_t>(k) * 4;
        const double cx = attr.uniform01(base) * w;
        const double cy = attr.uniform01(base + 1) * h;
        const double jitter = 0.7 + 0.3 * attr.uniform01(base + 2);
        segments.push_back({cx - half_len * ux, cy - half_len * uy,
                            cx + half_len * ux, cy + half_len * uy,
                            p.intensity * jitter});
    }
    return segments;
}

ImageTensor gen_streak_layer(int h, int w, const StreakLayerParams& p) {
    const std::vector<StreakSegment> segments = layer_segments(h, w, p);
    const double reach = p.width / 2.0 + 0.5; // coverage support radius

    ImageTensor mask(h, w, 1);
    for (const StreakSegment& s : segments) {
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(s.ax, s.bx) - reach)));
        const int x1 = std::min(w - 1, static_cast<int>(std::ceil(std::max(s.ax, s.bx) + reach)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(s.ay, s.by) - reach)));
        const int y1 = std::min(h - 1, static_cast<int>(std::ceil(std::max(s.ay, s.by) + reach)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double d = point_segment_dist(x + 0.5, y + 0.5, s.ax, s.ay, s.bx, s.by);
                const double coverage = std::clamp(p.width / 2.0 + 0.5 - d, 0.0, 1.0);
                if (coverage > 0.0) mask.at(y, x) += s.value * coverage;
            }
    }
    for (double& v : mask.data()) v = clamp01(v);
    return mask;
}

ModerateRain apply_moderate(const ImageTensor& clean, std::span<const StreakLayerParams> layers) {
    ModerateRain out{clean, build_mask(clean.height(), clean.width(), layers)};
    const ImageTensor& mask = out.mask;
    for (int y = 0; y < clean.height(); ++y)
        for (int x = 0; x < clean.width(); ++x)
            for (int c = 0; c < clean.channels(); ++c)
                out.rain.at(y, x, c) = clamp01(clean.at(y, x, c) + mask.at(y, x));
    return out;
}

ImageTensor gen_transmission(const VeilParams& v) {
    v.validate();
    ImageTensor t = v.depth;
    for (double& d : t.data()) d = std::exp(-v.beta * d);
    return t;
}

HeavyRain apply_heavy(const ImageTensor& clean, std::span<const StreakLayerParams> layers,
                      const VeilParams& v) {
    if (v.depth.height() != clean.height() || v.depth.width() != clean.width())
        throw ShapeError("depth map dims must match the clean image");
    v.validate();

    HeavyRain out{clean, build_mask(clean.height(), clean.width(), layers), gen_transmission(v)};
    const ImageTensor& mask = out.mask;
    for (int y = 0; y < clean.height(); ++y)
        for (int x = 0; x < clean.width(); ++x) {
            const double t = out.transmission.at(y, x);
            const double m = mask.at(y, x);
            for (int c = 0; c < clean.channels(); ++c) {
                const double a = v.atmospheric_light[clean.channels() == 1 ? 0 : c];
                out.rain.at(y, x, c) = clamp01(t * (clean.at(y, x, c) + m) + (1.0 - t) * a);
            }
        }
    return out;
}

} // namespace ctk
