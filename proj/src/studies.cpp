#include "ctk/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "ctk/baselines.hpp"
#include "ctk/color.hpp"
#include "ctk/image_io.hpp"
#include "ctk/metrics.hpp"
#include "ctk/parallel.hpp"

namespace ctk {
namespace {

constexpr int kSsimWindow = 11;

bool is_raster_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

// Number of levels until the semantic subband stops shrinking (input 1x1).
int feasible_levels(int h, int w, int max_level) {
    int l = 0;
    while (l < max_level && !(h == 1 && w == 1)) {
        h = (h + 1) / 2;
        w = (w + 1) / 2;
        ++l;
    }
    return l;
}

ImageTensor minmax_normalize(const ImageTensor& band) {
    double lo = band.data()[0], hi = band.data()[0];
    for (double v : band.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ImageTensor out = band;
    if (hi - lo <= 0.0) {
        for (double& v : out.data()) v = 0.0;
    } else {
        const double scale = 1.0 / (hi - lo);
        for (double& v : out.data()) v = (v - lo) * scale;
    }
    return out;
}

ImageTensor upsample_nearest(const ImageTensor& band, int target_h, int target_w) {
    ImageTensor out(target_h, target_w, band.channels());
    for (int y = 0; y < target_h; ++y)
        for (int x = 0; x < target_w; ++x)
            for (int c = 0; c < band.channels(); ++c)
                out.at(y, x, c) = band.at(std::min(y / 2, band.height() - 1),
                                          std::min(x / 2, band.width() - 1), c);
    return out;
}

double band_vs_mask_ssim(const ImageTensor& band, const ImageTensor& mask) {
    return ssim(to_luma(minmax_normalize(band)), mask);
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    out += '"';
    return out;
}

std::string render_value_csv(const StudyValue& v) {
    if (std::holds_alternative<std::monostate>(v)) return "";
    if (const double* d = std::get_if<double>(&v)) return format_number(*d);
    if (const long long* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return csv_escape(std::get<std::string>(v));
}

std::string render_value_json(const StudyValue& v) {
    if (std::holds_alternative<std::monostate>(v)) return "null";
    if (const double* d = std::get_if<double>(&v)) return format_number(*d);
    if (const long long* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return json_escape(std::get<std::string>(v));
}

const StudyValue* find_value(const StudyRow& row, const std::string& key) {
    for (const auto& [k, v] : row)
        if (k == key) return &v;
    return nullptr;
}

} // namespace

PairedDataset load_paired_dataset(const std::filesystem::path& rain_dir,
                                  const std::filesystem::path& clean_dir) {
    auto scan = [](const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir))
            throw IoError("not a directory: '" + dir.string() + "'");
        std::map<std::string, std::filesystem::path> by_stem;
        for (const auto& entry : std::filesystem::directory_iterator(dir))
            if (entry.is_regular_file() && is_raster_file(entry.path()))
                by_stem[entry.path().stem().string()] = entry.path();
        return by_stem;
    };
    const auto rain = scan(rain_dir);
    const auto clean = scan(clean_dir);

    PairedDataset ds;
    for (const auto& [stem, rain_path] : rain) {
        auto it = clean.find(stem);
        if (it == clean.end()) {
            std::cerr << "warning: no clean image for stem '" << stem << "', skipping\n";
            continue;
        }
        ds.pairs.emplace_back(rain_path, it->second);
    }
    for (const auto& [stem, path] : clean)
        if (!rain.count(stem))
            std::cerr << "warning: no rain image for stem '" << stem << "', skipping\n";
    return ds;
}

std::vector<StudyRow> run_level_study(const PairedDataset& ds, int max_level, const CtConfig& cfg) {
    if (max_level < 1) throw ConfigError("max_level must be >= 1");
    if (ds.pairs.empty()) throw ConfigError("level study needs a nonempty dataset");

    struct PairResult {
        std::string stem;
        int levels_run = 0;
        bool truncated = false;
        std::vector<double> mse_by_level;
        std::vector<std::optional<double>> ssim_by_level;
    };
    std::vector<PairResult> results(ds.pairs.size());

    parallel_for(static_cast<int>(ds.pairs.size()), [&](int i) {
        const auto& [rain_path, clean_path] = ds.pairs[i];
        const ImageTensor rain = load_image(rain_path);
        const ImageTensor clean = load_image(clean_path);
        if (!rain.same_shape(clean))
            throw ShapeError("pair '" + rain_path.stem().string() + "': image dims differ");

        PairResult& r = results[i];
        r.stem = rain_path.stem().string();
        r.levels_run = feasible_levels(rain.height(), rain.width(), max_level);
        r.truncated = r.levels_run < max_level;

        CtConfig run_cfg = cfg;
        run_cfg.levels = r.levels_run;
        const ContourletDecomposition dr = ct_forward(rain, run_cfg);
        const ContourletDecomposition dc = ct_forward(clean, run_cfg);
        for (int l = 0; l < r.levels_run; ++l) {
            const ImageTensor& sr = dr.ss_chain[l];
            const ImageTensor& sc = dc.ss_chain[l];
            r.mse_by_level.push_back(mse(sr, sc));
            if (sr.height() >= kSsimWindow && sr.width() >= kSsimWindow)
                r.ssim_by_level.push_back(ssim(sr, sc));
            else
                r.ssim_by_level.push_back(std::nullopt);
        }
    });

    const int levels_present = results.empty() ? 0
                                               : std::max_element(results.begin(), results.end(),
                                                                  [](const auto& a, const auto& b) {
                                                                      return a.levels_run < b.levels_run;
                                                                  })
                                                     ->levels_run;

    std::vector<StudyRow> rows;
    auto make_row = [](const std::string& kind, const std::string& pair, StudyValue level,
                       StudyValue mse_v, StudyValue ssim_v, bool ssim_skipped,
                       const std::string& note) {
        return StudyRow{{"row", kind},           {"pair", pair},
                        {"level", level},        {"mse", mse_v},
                        {"ssim", ssim_v},        {"ssim_skipped", ssim_skipped},
                        {"note", note}};
    };

    for (const PairResult& r : results) {
        for (int l = 0; l < r.levels_run; ++l)
            rows.push_back(make_row("pair", r.stem, static_cast<long long>(l + 1),
                                    r.mse_by_level[l],
                                    r.ssim_by_level[l] ? StudyValue(*r.ssim_by_level[l])
                                                       : StudyValue(std::monostate{}),
                                    !r.ssim_by_level[l].has_value(), ""));
        if (r.truncated)
            rows.push_back(make_row("warning", r.stem,
                                    static_cast<long long>(r.levels_run), std::monostate{},
                                    std::monostate{}, false,
                                    "levels truncated: ss would drop below 1x1"));
    }

    for (int l = 0; l < levels_present; ++l) {
        std::vector<double> mses, ssims;
        for (const PairResult& r : results)
            if (l < r.levels_run) {
                mses.push_back(r.mse_by_level[l]);
                if (r.ssim_by_level[l]) ssims.push_back(*r.ssim_by_level[l]);
            }
        const double mse_mean = pairwise_sum(mses) / static_cast<double>(mses.size());
        StudyValue ssim_mean = std::monostate{};
        if (!ssims.empty()) ssim_mean = pairwise_sum(ssims) / static_cast<double>(ssims.size());
        rows.push_back(make_row("aggregate", "", static_cast<long long>(l + 1), mse_mean,
                                ssim_mean, ssims.empty(), ""));
    }
    return rows;
}

std::vector<StudyRow> run_extraction_compare(const ImageTensor& clean, const ImageTensor& rain,
                                             const ImageTensor& mask, const CtConfig& cfg,
                                             double hl_sigma) {
    if (mask.channels() != 1) throw ShapeError("rain mask must be single-channel");
    if (!clean.same_shape(rain)) throw ShapeError("clean/rain dims differ");
    if (mask.height() != rain.height() || mask.width() != rain.width())
        throw ShapeError("mask dims differ from the rain image");
    if (!(hl_sigma > 0.0)) throw ConfigError("hl sigma must be positive");
    cfg.validate();

    double mask_max = 0.0;
    for (double v : mask.data()) mask_max = std::max(mask_max, v);
    const bool degenerate = mask_max == 0.0;

    const int h = rain.height(), w = rain.width();
    std::vector<StudyRow> rows;
    auto add_row = [&](const std::string& method, const std::string& band, double score) {
        rows.push_back(StudyRow{{"method", method},
                                {"band", band},
                                {"score", score},
                                {"degenerate", degenerate}});
    };

    // CT: level-1 direction subbands at full resolution
    CtConfig level1 = cfg;
    level1.levels = 1;
    const ContourletDecomposition dec = ct_forward(rain, level1);
    std::vector<ImageTensor> ct_bands;
    ct_bands.reserve(dec.ms[0].size());
    for (const ImageTensor& band : dec.ms[0]) ct_bands.push_back(band.cropped(h, w));
    for (size_t d = 0; d < ct_bands.size(); ++d)
        add_row("ct", "d" + std::to_string(d), band_vs_mask_ssim(ct_bands[d], mask));

    // best two-subband sum over all unordered pairs
    double best_pair = -2.0;
    std::string best_pair_name = "";
    for (size_t d1 = 0; d1 + 1 < ct_bands.size(); ++d1)
        for (size_t d2 = d1 + 1; d2 < ct_bands.size(); ++d2) {
            ImageTensor sum = ct_bands[d1];
            for (size_t i = 0; i < sum.size(); ++i) sum.data()[i] += ct_bands[d2].data()[i];
            const double score = band_vs_mask_ssim(sum, mask);
            if (score > best_pair) {
                best_pair = score;
                best_pair_name = "d" + std::to_string(d1) + "+d" + std::to_string(d2);
            }
        }
    add_row("ct-pair", best_pair_name, best_pair);

    // DWT: half-resolution detail bands, nearest-upsampled for comparability
    const DwtQuad quad = dwt_haar_forward(rain);
    const std::pair<std::string, const ImageTensor*> dwt_bands[] = {
        {"lh", &quad.lh}, {"hl", &quad.hl_band}, {"hh", &quad.hh}};
    for (const auto& [name, band] : dwt_bands)
        add_row("dwt", name, band_vs_mask_ssim(upsample_nearest(*band, h, w), mask));

    // HL: single high band
    const HlPair pair = hl_split(rain, hl_sigma);
    add_row("hl", "high", band_vs_mask_ssim(pair.high, mask));
    return rows;
}

std::string render_report(const std::vector<StudyRow>& rows, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Csv) {
        if (rows.empty()) return "\n";
        const StudyRow& header = rows.front();
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(header[i].first);
        }
        out += '\n';
        for (const StudyRow& row : rows) {
            for (size_t i = 0; i < header.size(); ++i) {
                if (i) out += ',';
                const StudyValue* v = find_value(row, header[i].first);
                out += v ? render_value_csv(*v) : "";
            }
            out += '\n';
        }
        return out;
    }
    if (rows.empty()) return "[]\n";
    out += "[\n";
    for (size_t r = 0; r < rows.size(); ++r) {
        out += "  {";
        for (size_t i = 0; i < rows[r].size(); ++i) {
            if (i) out += ", ";
            out += json_escape(rows[r][i].first);
            out += ": ";
            out += render_value_json(rows[r][i].second);
        }
        out += r + 1 < rows.size() ? "},\n" : "}\n";
    }
    out += "]\n";
    return out;
}

void emit_report(const std::vector<StudyRow>& rows, const std::filesystem::path& path,
                 ReportFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = render_report(rows, format);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

} // namespace ctk
