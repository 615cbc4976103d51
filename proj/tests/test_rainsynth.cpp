#include <doctest.h>

#include <cmath>

#include "ctk/rainsynth.hpp"
#include "ctk/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ctk;

namespace {

StreakLayerParams default_layer(uint64_t seed) {
    StreakLayerParams p;
    p.seed = seed;
    return p;
}

} // namespace

TEST_SUITE("rainsynth") {

TEST_CASE("vanishing density yields an empty mask") {
    StreakLayerParams p = default_layer(1);
    p.density = 1e-9;
    CHECK(testutil::max_abs(gen_streak_layer(32, 32, p)) == 0.0);
    CHECK(layer_segments(32, 32, p).empty());
}

TEST_CASE("a fixed seed reproduces the identical mask") {
    const StreakLayerParams p = default_layer(1234);
    const ImageTensor a = gen_streak_layer(48, 48, p);
    const ImageTensor b = gen_streak_layer(48, 48, p);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a.data()[i] == b.data()[i]);
    // and a different seed does not
    StreakLayerParams q = p;
    q.seed = 1235;
    CHECK(testutil::max_abs_diff(gen_streak_layer(48, 48, q), a) > 0.0);
}

TEST_CASE("vertical streak coverage hugs the segments") {
    StreakLayerParams p;
    p.angle_deg = 0.0;
    p.length = 9.0;
    p.width = 1.0;
    p.density = 1.0;
    p.intensity = 0.9;
    p.seed = 5;
    const int h = 40, w = 40;
    const auto segments = layer_segments(h, w, p);
    REQUIRE(!segments.empty());
    for (const auto& s : segments) CHECK(s.ax == s.bx); // vertical: zero x extent

    const ImageTensor mask = gen_streak_layer(h, w, p);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (mask.at(y, x) <= 0.0) continue;
            double nearest = 1e300;
            for (const auto& s : segments)
                nearest = std::min(nearest, oracle::segment_dist(x + 0.5, y + 0.5,
                                                                 s.ax, s.ay, s.bx, s.by));
            CHECK(nearest <= 1.0);
        }
}

TEST_CASE("rasterizer agrees with an independent coverage oracle") {
    StreakLayerParams p;
    p.angle_deg = 30.0;
    p.length = 11.0;
    p.width = 2.0;
    p.density = 2.0;
    p.intensity = 0.8;
    p.seed = 17;
    const int h = 32, w = 32;
    const ImageTensor mask = gen_streak_layer(h, w, p);
    const auto segments = layer_segments(h, w, p);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double want = 0.0;
            for (const auto& s : segments) {
                const double d = oracle::segment_dist(x + 0.5, y + 0.5, s.ax, s.ay, s.bx, s.by);
                const double cov = std::min(1.0, std::max(0.0, p.width / 2.0 + 0.5 - d));
                want += s.value * cov;
            }
            want = clamp01(want);
            CHECK(std::abs(mask.at(y, x) - want) <= 1e-12);
        }
}

TEST_CASE("parameter validation") {
    StreakLayerParams p;
    p.angle_deg = 50.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.length = 0.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.density = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.intensity = 1.5;
    CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("moderate rain with no layers is the identity") {
    const ImageTensor clean = testutil::make_scene(24, 24, 3);
    const ModerateRain out = apply_moderate(clean, {});
    CHECK(testutil::max_abs_diff(out.rain, clean) == 0.0);
    CHECK(testutil::max_abs(out.mask) == 0.0);
}

TEST_CASE("moderate rain over black equals the mask; over white it saturates") {
    const StreakLayerParams p = default_layer(8);
    const std::vector<StreakLayerParams> layers{p};

    const ModerateRain black = apply_moderate(ImageTensor(32, 32, 1), layers);
    for (size_t i = 0; i < black.rain.size(); ++i)
        CHECK(black.rain.data()[i] == black.mask.data()[i]);

    const ModerateRain white = apply_moderate(ImageTensor::constant(32, 32, 1, 1.0), layers);
    for (double v : white.rain.data()) CHECK(v == 1.0);
}

TEST_CASE("mask is nonnegative and rain stays in range") {
    std::vector<StreakLayerParams> layers{default_layer(1), default_layer(2), default_layer(3)};
    const ModerateRain out = apply_moderate(testutil::make_scene(40, 40, 9), layers);
    for (double v : out.mask.data()) CHECK(v >= 0.0);
    for (double v : out.rain.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("transmission closed forms") {
    VeilParams v;
    v.depth = make_depth(DepthKind::Constant, 4, 4);
    v.beta = 0.0;
    const ImageTensor t1 = gen_transmission(v);
    for (double t : t1.data()) CHECK(t == 1.0);

    v.beta = std::log(2.0);
    const ImageTensor t_half = gen_transmission(v);
    for (double t : t_half.data()) CHECK(std::abs(t - 0.5) <= 1e-15);

    v.beta = 1.0;
    v.depth = make_depth(DepthKind::Ramp, 8, 4);
    const ImageTensor t_ramp = gen_transmission(v);
    for (int y = 1; y < 8; ++y) CHECK(t_ramp.at(y, 0) < t_ramp.at(y - 1, 0));
}

TEST_CASE("increasing beta never increases transmission") {
    VeilParams lo, hi;
    lo.depth = hi.depth = make_depth(DepthKind::Radial, 9, 9);
    lo.beta = 0.4;
    hi.beta = 1.7;
    const ImageTensor tl = gen_transmission(lo), th = gen_transmission(hi);
    for (size_t i = 0; i < tl.size(); ++i) CHECK(th.data()[i] <= tl.data()[i]);
}

TEST_CASE("unit transmission reduces the heavy model to the moderate model bitwise") {
    const ImageTensor clean = testutil::make_scene(32, 32, 11);
    std::vector<StreakLayerParams> layers{default_layer(4), default_layer(5)};
    VeilParams v;
    v.beta = 0.0; // T = 1 everywhere
    v.depth = make_depth(DepthKind::Ramp, 32, 32);

    const HeavyRain heavy = apply_heavy(clean, layers, v);
    const ModerateRain moderate = apply_moderate(clean, layers);
    for (size_t i = 0; i < heavy.rain.size(); ++i)
        CHECK(heavy.rain.data()[i] == moderate.rain.data()[i]);
    for (size_t i = 0; i < heavy.mask.size(); ++i)
        CHECK(heavy.mask.data()[i] == moderate.mask.data()[i]);
}

TEST_CASE("zero transmission shows only the atmospheric light") {
    const ImageTensor clean = testutil::make_scene(16, 16, 12);
    VeilParams v;
    v.atmospheric_light = {0.85, 0.85, 0.85};
    v.beta = 800.0; // exp(-800) underflows to exactly 0
    v.depth = make_depth(DepthKind::Constant, 16, 16);
    const HeavyRain out = apply_heavy(clean, {}, v);
    for (double t : out.transmission.data()) CHECK(t == 0.0);
    for (double r : out.rain.data()) CHECK(r == 0.85);
}

TEST_CASE("half transmission of black plus unit light gives a half-gray frame") {
    VeilParams v;
    v.atmospheric_light = {1.0, 1.0, 1.0};
    v.beta = std::log(2.0);
    v.depth = make_depth(DepthKind::Constant, 8, 8);
    const HeavyRain out = apply_heavy(ImageTensor(8, 8, 1), {}, v);
    for (double r : out.rain.data()) CHECK(std::abs(r - 0.5) <= 1e-15);
}

TEST_CASE("heavy model validates dims and params") {
    VeilParams v;
    v.depth = make_depth(DepthKind::Ramp, 4, 4);
    CHECK_THROWS_AS(apply_heavy(ImageTensor(8, 8, 1), {}, v), ShapeError);
    v.depth = make_depth(DepthKind::Ramp, 8, 8);
    v.atmospheric_light = {1.4, 0.5, 0.5};
    CHECK_THROWS_AS(apply_heavy(ImageTensor(8, 8, 1), {}, v), ConfigError);
}

} // TEST_SUITE
