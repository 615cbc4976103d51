#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctk/dfb.hpp"
#include "ctk/fft.hpp"
#include "ctk/image_io.hpp"
#include "ctk/rainsynth.hpp"
#include "ctk/studies.hpp"
#include "test_util.hpp"

using namespace ctk;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / "ctk-test-studies" / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const StudyValue* field(const StudyRow& row, const std::string& key) {
    for (const auto& [k, v] : row)
        if (k == key) return &v;
    return nullptr;
}

} // namespace

TEST_SUITE("studies") {

TEST_CASE("report rendering: empty, single row, quoting, digits") {
    CHECK(render_report({}, ReportFormat::Csv) == "\n");
    CHECK(render_report({}, ReportFormat::Json) == "[]\n");

    StudyRow row{{"name", std::string("a,b \"c\"")},
                 {"value", 0.123456789123},
                 {"count", static_cast<long long>(3)},
                 {"flag", true},
                 {"gap", std::monostate{}}};
    const std::string csv = render_report({row}, ReportFormat::Csv);
    CHECK(csv == "name,value,count,flag,gap\n\"a,b \"\"c\"\"\",0.123456789,3,true,\n");

    const std::string json_text = render_report({row}, ReportFormat::Json);
    const auto parsed = nlohmann::json::parse(json_text);
    REQUIRE(parsed.is_array());
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0]["name"] == "a,b \"c\"");
    CHECK(std::abs(parsed[0]["value"].get<double>() - 0.123456789) <= 1e-12);
    CHECK(parsed[0]["count"] == 3);
    CHECK(parsed[0]["flag"] == true);
    CHECK(parsed[0]["gap"].is_null());
}

TEST_CASE("paired dataset matches by stem and skips singletons") {
    const fs::path rain = temp_dir("ds-rain"), clean = temp_dir("ds-clean");
    save_image(testutil::make_scene(16, 16, 1), rain / "a.png");
    save_image(testutil::make_scene(16, 16, 2), rain / "b.png");
    save_image(testutil::make_scene(16, 16, 3), clean / "a.png");
    save_image(testutil::make_scene(16, 16, 4), clean / "c.png");

    const PairedDataset ds = load_paired_dataset(rain, clean);
    REQUIRE(ds.count() == 1);
    CHECK(ds.pairs[0].first.stem() == "a");
    CHECK_THROWS_AS(load_paired_dataset(rain / "nope", clean), IoError);
}

TEST_CASE("level study on identical pairs reports zero difference") {
    const fs::path rain = temp_dir("ls-rain"), clean = temp_dir("ls-clean");
    for (int i = 0; i < 2; ++i) {
        const ImageTensor img = testutil::make_scene(64, 64, 200 + i);
        save_image(img, rain / ("p" + std::to_string(i) + ".png"));
        save_image(img, clean / ("p" + std::to_string(i) + ".png"));
    }
    CtConfig cfg;
    cfg.num_directions = 4;
    const auto rows = run_level_study(load_paired_dataset(rain, clean), 3, cfg);

    int pair_rows = 0, aggregate_rows = 0;
    for (const StudyRow& row : rows) {
        const auto& kind = std::get<std::string>(*field(row, "row"));
        if (kind == "pair") {
            ++pair_rows;
            CHECK(std::get<double>(*field(row, "mse")) <= 1e-18);
            if (!std::get<bool>(*field(row, "ssim_skipped")))
                CHECK(std::get<double>(*field(row, "ssim")) == doctest::Approx(1.0));
        } else if (kind == "aggregate") {
            ++aggregate_rows;
        }
    }
    CHECK(pair_rows == 6); // 2 pairs x 3 levels
    CHECK(aggregate_rows == 3);
}

TEST_CASE("level study truncates once the ss cannot shrink") {
    const fs::path rain = temp_dir("tr-rain"), clean = temp_dir("tr-clean");
    const ImageTensor img = testutil::make_scene(4, 4, 5);
    save_image(img, rain / "t.png");
    save_image(img, clean / "t.png");
    CtConfig cfg;
    cfg.num_directions = 2;
    const auto rows = run_level_study(load_paired_dataset(rain, clean), 8, cfg);
    bool warned = false;
    int pair_rows = 0;
    for (const StudyRow& row : rows) {
        const auto& kind = std::get<std::string>(*field(row, "row"));
        if (kind == "warning") warned = true;
        if (kind == "pair") ++pair_rows;
    }
    CHECK(warned);
    CHECK(pair_rows == 2); // 4x4 -> 2x2 -> 1x1 supports exactly two levels
}

TEST_CASE("level study requires data and matching dims") {
    CtConfig cfg;
    CHECK_THROWS_AS(run_level_study(PairedDataset{}, 3, cfg), ConfigError);

    const fs::path rain = temp_dir("mm-rain"), clean = temp_dir("mm-clean");
    save_image(testutil::make_scene(16, 16, 1), rain / "x.png");
    save_image(testutil::make_scene(24, 16, 1), clean / "x.png");
    CHECK_THROWS_AS(run_level_study(load_paired_dataset(rain, clean), 2, cfg), ShapeError);
}

TEST_CASE("extraction compare flags a rainless mask as degenerate") {
    const ImageTensor clean = testutil::make_scene(32, 32, 77);
    CtConfig cfg;
    cfg.num_directions = 4;
    const auto rows = run_extraction_compare(clean, clean, ImageTensor(32, 32, 1), cfg, 2.0);
    REQUIRE(!rows.empty());
    for (const StudyRow& row : rows) CHECK(std::get<bool>(*field(row, "degenerate")));
}

TEST_CASE("extraction compare validates inputs") {
    const ImageTensor img = testutil::make_scene(32, 32, 1);
    CtConfig cfg;
    CHECK_THROWS_AS(run_extraction_compare(img, img, ImageTensor(32, 32, 3), cfg, 2.0), ShapeError);
    CHECK_THROWS_AS(run_extraction_compare(img, img, ImageTensor(16, 32, 1), cfg, 2.0), ShapeError);
    CHECK_THROWS_AS(run_extraction_compare(img, img, ImageTensor(32, 32, 1), cfg, 0.0), ConfigError);
}

TEST_CASE("the winning wedge of a vertical-streak image contains the vertical orientation") {
    // vertical streaks, moderate rain over a smooth scene
    const ImageTensor clean = testutil::make_scene(64, 64, 31);
    StreakLayerParams p;
    p.angle_deg = 0.0;
    p.length = 14.0;
    p.width = 1.5;
    p.density = 3.0;
    p.intensity = 0.9;
    p.seed = 21;
    const ModerateRain rained = apply_moderate(clean, std::vector{p});

    CtConfig cfg;
    cfg.num_directions = 8;
    const auto rows = run_extraction_compare(clean, rained.rain, rained.mask, cfg, 2.0);

    int best_band = -1;
    double best_score = -2.0;
    for (const StudyRow& row : rows) {
        if (std::get<std::string>(*field(row, "method")) != "ct") continue;
        const double score = std::get<double>(*field(row, "score"));
        if (score > best_score) {
            best_score = score;
            best_band = std::stoi(std::get<std::string>(*field(row, "band")).substr(1));
        }
    }
    REQUIRE(best_band >= 0);

    // wedge-energy oracle: which wedge holds most of the mask's spectrum?
    const WedgeBank bank = build_wedge_bank(64, 64, 8, cfg.transition_frac);
    std::vector<Complex> spec(64 * 64);
    for (size_t i = 0; i < spec.size(); ++i) spec[i] = Complex(rained.mask.data()[i], 0.0);
    fft2(spec, 64, 64);
    spec[0] = 0.0; // orientation is about the AC content
    int oracle_band = -1;
    double oracle_energy = -1.0;
    for (int d = 0; d < 8; ++d) {
        double e = 0.0;
        for (size_t i = 0; i < spec.size(); ++i)
            e += std::norm(spec[i]) * bank.windows[d][i] * bank.windows[d][i];
        if (e > oracle_energy) {
            oracle_energy = e;
            oracle_band = d;
        }
    }
    CHECK(best_band == oracle_band);
    // vertical streaks put their energy along horizontal frequencies (wedge 4 of 8)
    CHECK(oracle_band == 4);
}

TEST_CASE("reports write to disk byte-stably") {
    const fs::path dir = temp_dir("emit");
    StudyRow row{{"k", 1.5}, {"s", std::string("x")}};
    emit_report({row, row}, dir / "r.csv", ReportFormat::Csv);
    emit_report({row, row}, dir / "r.json", ReportFormat::Json);
    const std::string csv1 = slurp(dir / "r.csv");
    emit_report({row, row}, dir / "r.csv", ReportFormat::Csv);
    CHECK(slurp(dir / "r.csv") == csv1);
    CHECK(csv1 == "k,s\n1.5,x\n1.5,x\n");
    CHECK(nlohmann::json::parse(slurp(dir / "r.json")).size() == 2);
}

} // TEST_SUITE
