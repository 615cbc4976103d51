#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctk/color.hpp"
#include "ctk/image.hpp"
#include "ctk/image_io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ctk;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "ctk-test-imagecore";
        fs::create_directories(d);
        return d;
    }();
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("imagecore") {

TEST_CASE("8-bit gray png round trip has exact quantization levels") {
    ImageTensor img(2, 2, 1, {0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0});
    const fs::path p = temp_file("gray2x2.png");
    save_image(img, p);
    const ImageTensor back = load_image(p);
    REQUIRE(back.height() == 2);
    REQUIRE(back.width() == 2);
    REQUIRE(back.channels() == 1);
    CHECK(back.at(0, 0) == 0.0);
    CHECK(back.at(0, 1) == 1.0);
    CHECK(back.at(1, 0) == 128.0 / 255.0);
    CHECK(back.at(1, 1) == 64.0 / 255.0);
}

TEST_CASE("1x1 rgb pixel") {
    ImageTensor img(1, 1, 3, {1.0, 0.0, 0.0});
    const fs::path p = temp_file("red1x1.png");
    save_image(img, p);
    const ImageTensor back = load_image(p);
    REQUIRE(back.channels() == 3);
    CHECK(back.at(0, 0, 0) == 1.0);
    CHECK(back.at(0, 0, 1) == 0.0);
    CHECK(back.at(0, 0, 2) == 0.0);
}

TEST_CASE("truncated png fails with a decode error") {
    const fs::path good = temp_file("whole.png");
    save_image(testutil::random_image(8, 8, 3, 3), good);
    const std::string bytes = slurp(good);
    const fs::path bad = temp_file("truncated.png");
    std::ofstream(bad, std::ios::binary).write(bytes.data(), bytes.size() / 2);
    CHECK_THROWS_AS(load_image(bad), DecodeError);
}

TEST_CASE("nonexistent and non-raster files are decode errors") {
    CHECK_THROWS_AS(load_image(temp_file("missing.png")), DecodeError);
    const fs::path junk = temp_file("junk.bin");
    std::ofstream(junk, std::ios::binary) << "not an image at all";
    CHECK_THROWS_AS(load_image(junk), DecodeError);
}

TEST_CASE("save clamps out-of-range samples") {
    ImageTensor img(1, 2, 1, {1.3, -0.2});
    const fs::path p = temp_file("clamp.png");
    save_image(img, p);
    const ImageTensor back = load_image(p);
    CHECK(back.at(0, 0) == 1.0);
    CHECK(back.at(0, 1) == 0.0);
}

TEST_CASE("save/load of constant 0.5 stays within one quantization step") {
    const fs::path p = temp_file("half.png");
    save_image(ImageTensor::constant(2, 2, 1, 0.5), p);
    const ImageTensor back = load_image(p);
    for (double v : back.data()) CHECK(std::abs(v - 0.5) <= 1.0 / 255.0);
}

TEST_CASE("second save of a reloaded image reproduces identical bytes") {
    const fs::path p1 = temp_file("idem1.png"), p2 = temp_file("idem2.png");
    save_image(testutil::random_image(9, 13, 3, 11), p1);
    save_image(load_image(p1), p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("binary pgm and ppm load, including 16-bit big-endian") {
    const fs::path pgm = temp_file("t.pgm");
    {
        std::ofstream out(pgm, std::ios::binary);
        out << "P5\n# comment\n2 2\n255\n";
        const unsigned char px[4] = {0, 255, 128, 64};
        out.write(reinterpret_cast<const char*>(px), 4);
    }
    const ImageTensor g = load_image(pgm);
    CHECK(g.channels() == 1);
    CHECK(g.at(0, 1) == 1.0);
    CHECK(g.at(1, 0) == 128.0 / 255.0);

    const fs::path ppm = temp_file("t16.ppm");
    {
        std::ofstream out(ppm, std::ios::binary);
        out << "P6\n1 1\n65535\n";
        const unsigned char px[6] = {0xff, 0xff, 0x00, 0x00, 0x80, 0x00};
        out.write(reinterpret_cast<const char*>(px), 6);
    }
    const ImageTensor c = load_image(ppm);
    CHECK(c.at(0, 0, 0) == 1.0);
    CHECK(c.at(0, 0, 1) == 0.0);
    CHECK(c.at(0, 0, 2) == 0x8000 / 65535.0);

    const fs::path badmax = temp_file("badmax.pgm");
    std::ofstream(badmax, std::ios::binary) << "P5\n2 2\n1023\n01234567";
    CHECK_THROWS_AS(load_image(badmax), DecodeError);
}

TEST_CASE("16-bit png preserves precision beyond 8 bits") {
    // 2x1 16-bit gray PNG with samples 0x1234 and 0xffff
    static const unsigned char png16[] = {
        0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48,
        0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x01, 0x10, 0x00, 0x00, 0x00,
        0x00, 0x81, 0xd9, 0xfc, 0x15, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78,
        0x9c, 0x63, 0x10, 0x32, 0xf9, 0xff, 0x1f, 0x00, 0x03, 0xe6, 0x02, 0x45, 0x2e, 0x42,
        0x96, 0x75, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};
    const fs::path p = temp_file("d16.png");
    std::ofstream(p, std::ios::binary)
        .write(reinterpret_cast<const char*>(png16), sizeof(png16));
    const ImageTensor img = load_image(p);
    REQUIRE(img.width() == 2);
    CHECK(img.at(0, 0) == 0x1234 / 65535.0);
    CHECK(img.at(0, 1) == 1.0);

    // and the same sample via 16-bit PNM
    const fs::path q = temp_file("d16.pgm");
    {
        std::ofstream out(q, std::ios::binary);
        out << "P5\n1 1\n65535\n";
        const unsigned char px[2] = {0x12, 0x34};
        out.write(reinterpret_cast<const char*>(px), 2);
    }
    CHECK(load_image(q).at(0, 0) == 0x1234 / 65535.0);
}

TEST_CASE("to_lab matches the reference pipeline and the published anchors") {
    double L, a, b;
    srgb_to_lab(1.0, 1.0, 1.0, L, a, b);
    CHECK(std::abs(L - 100.0) < 1e-3);
    CHECK(std::abs(a) <= 0.01);
    CHECK(std::abs(b) <= 0.01);

    srgb_to_lab(0.0, 0.0, 0.0, L, a, b);
    CHECK(std::abs(L) < 1e-12);
    CHECK(std::abs(a) < 1e-12);
    CHECK(std::abs(b) < 1e-12);

    srgb_to_lab(0.5, 0.5, 0.5, L, a, b);
    CHECK(std::abs(L - 53.3890) < 0.001);
    CHECK(std::abs(a) <= 0.01);
    CHECK(std::abs(b) <= 0.01);

    // seeded sweep against the independently coded conversion
    CounterRng rng(99, 0);
    for (uint64_t i = 0; i < 64; ++i) {
        const double r = rng.uniform01(3 * i), g = rng.uniform01(3 * i + 1), bb = rng.uniform01(3 * i + 2);
        double rl, ra, rb;
        oracle::srgb_to_lab_ref(r, g, bb, rl, ra, rb);
        srgb_to_lab(r, g, bb, L, a, b);
        CHECK(std::abs(L - rl) < 1e-9);
        CHECK(std::abs(a - ra) < 1e-9);
        CHECK(std::abs(b - rb) < 1e-9);
    }
}

TEST_CASE("lab of the six primary/secondary corners is finite with L in range") {
    const double corners[6][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 1, 1}, {1, 0, 1}};
    for (const auto& c : corners) {
        double L, a, b;
        srgb_to_lab(c[0], c[1], c[2], L, a, b);
        CHECK(std::isfinite(L));
        CHECK(std::isfinite(a));
        CHECK(std::isfinite(b));
        CHECK(L >= 0.0);
        CHECK(L <= 100.0 + 1e-6);
    }
}

TEST_CASE("to_lab rejects gray input") {
    CHECK_THROWS_AS(to_lab(ImageTensor::constant(2, 2, 1, 0.5)), ShapeError);
}

TEST_CASE("to_luma identity, weights, and range") {
    const ImageTensor gray = testutil::random_image(5, 7, 1, 4);
    CHECK(testutil::max_abs_diff(to_luma(gray), gray) == 0.0);

    ImageTensor red(1, 1, 3, {1.0, 0.0, 0.0});
    CHECK(to_luma(red).at(0, 0) == 0.299);
    ImageTensor white(1, 1, 3, {1.0, 1.0, 1.0});
    CHECK(std::abs(to_luma(white).at(0, 0) - 1.0) < 1e-15);

    const ImageTensor rgb = testutil::random_image(6, 6, 3, 5);
    const ImageTensor y = to_luma(rgb);
    for (double v : y.data()) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("tensor invariants") {
    CHECK_THROWS_AS(ImageTensor(0, 3, 1), ShapeError);
    CHECK_THROWS_AS(ImageTensor(2, 2, 0), ShapeError);
    CHECK_THROWS_AS(ImageTensor(2, 2, 1, {1.0}), ShapeError);
    // plane stacks with other channel counts exist in memory but not on disk
    CHECK_THROWS_AS(save_image(ImageTensor(2, 2, 2), temp_file("two.png")), ShapeError);
}

} // TEST_SUITE
