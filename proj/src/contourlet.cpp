#include "ctk/contourlet.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ctk/dfb.hpp"
#include "ctk/pyramid.hpp"

namespace ctk {
namespace {

bool is_pow2(int v) { return v >= 1 && (v & (v - 1)) == 0; }

// Dims of the band entering each level: ceil-halving chain from the original.
struct Dims {
    int h, w;
};

std::vector<Dims> level_input_dims(int orig_h, int orig_w, int levels) {
    std::vector<Dims> dims(levels + 1);
    dims[0] = {orig_h, orig_w};
    for (int l = 0; l < levels; ++l)
        dims[l + 1] = {(dims[l].h + 1) / 2, (dims[l].w + 1) / 2};
    return dims;
}

ImageTensor merge_channels(const std::vector<ImageTensor>& planes) {
    const int c = static_cast<int>(planes.size());
    if (c == 1) return planes[0];
    ImageTensor out(planes[0].height(), planes[0].width(), c);
    for (int ch = 0; ch < c; ++ch) out.set_channel(ch, planes[ch]);
    return out;
}

// ---- band blob format ----

constexpr char kMagic[4] = {'C', 'T', 'S', 'B'};
constexpr uint16_t kBandVersion = 1;

void put_u16(std::string& buf, uint16_t v) {
    buf.push_back(static_cast<char>(v & 0xff));
    buf.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& buf, uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string encode_band(const ImageTensor& band) {
    std::string buf;
    buf.reserve(16 + band.size() * 4);
    buf.append(kMagic, 4);
    put_u16(buf, kBandVersion);
    put_u32(buf, static_cast<uint32_t>(band.height()));
    put_u32(buf, static_cast<uint32_t>(band.width()));
    put_u16(buf, static_cast<uint16_t>(band.channels()));
    for (double v : band.data()) {
        const float f = static_cast<float>(v);
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(buf, bits);
    }
    return buf;
}

ImageTensor decode_band(const std::string& buf, const std::string& name) {
    auto fail = [&](const std::string& why) -> void {
        throw FormatError("band '" + name + "': " + why);
    };
    if (buf.size() < 16) fail("truncated header");
    if (std::memcmp(buf.data(), kMagic, 4) != 0) fail("bad magic");
    auto u16 = [&](size_t off) {
        return static_cast<uint16_t>(static_cast<unsigned char>(buf[off]) |
                                     (static_cast<unsigned char>(buf[off + 1]) << 8));
    };
    auto u32 = [&](size_t off) {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[off + i])) << (8 * i);
        return v;
    };
    if (u16(4) != kBandVersion) fail("unsupported version");
    const uint32_t h = u32(6), w = u32(10);
    const uint16_t c = u16(14);
    if (h < 1 || w < 1 || (c != 1 && c != 3)) fail("bad dims");
    const size_t n = static_cast<size_t>(h) * w * c;
    if (buf.size() != 16 + 4 * n) fail("payload size mismatch");
    std::vector<double> data(n);
    for (size_t i = 0; i < n; ++i) {
        const uint32_t bits = u32(16 + 4 * i);
        float f;
        std::memcpy(&f, &bits, 4);
        data[i] = f;
    }
    return ImageTensor(static_cast<int>(h), static_cast<int>(w), static_cast<int>(c), std::move(data));
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ManifestError("band file missing: '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::span<const double> CtConfig::kernel() const {
    return lp_kernel.empty() ? burt_kernel() : std::span<const double>(lp_kernel);
}

void CtConfig::validate() const {
    if (levels < 1 || levels > 8) throw ConfigError("levels must be in [1, 8]");
    if (!is_pow2(num_directions) || num_directions < 2 || num_directions > 64)
        throw ConfigError("num_directions must be a power of two in [2, 64]");
    if (!(transition_frac > 0.0) || transition_frac > 0.5)
        throw ConfigError("transition_frac must be in (0, 0.5]");
    if (!lp_kernel.empty()) {
        if (lp_kernel.size() % 2 == 0) throw ConfigError("lp_kernel must have odd length");
        double sum = 0.0;
        for (double t : lp_kernel) sum += t;
        if (std::abs(sum - 1.0) > 1e-12) throw ConfigError("lp_kernel must have DC gain 1");
    }
}

ContourletDecomposition ct_forward(const ImageTensor& img, const CtConfig& cfg) {
    cfg.validate();
    const int channels = img.channels();
    const auto kernel = cfg.kernel();

    // per-channel transform, merged back into multi-channel bands
    std::vector<std::vector<std::vector<ImageTensor>>> ms_c(cfg.levels);
    std::vector<std::vector<ImageTensor>> ss_c(cfg.levels);
    for (int l = 0; l < cfg.levels; ++l) {
        ms_c[l].resize(cfg.num_directions);
        ss_c[l].reserve(channels);
    }

    for (int ch = 0; ch < channels; ++ch) {
        ImageTensor current = channels == 1 ? img : img.channel(ch);
        for (int l = 0; l < cfg.levels; ++l) {
            LpLevel split = lp_analyze(current, kernel);
            auto bank = shared_wedge_bank(split.residual.height(), split.residual.width(),
                                          cfg.num_directions, cfg.transition_frac);
            std::vector<ImageTensor> subs = dfb_analyze(split.residual, *bank);
            for (int d = 0; d < cfg.num_directions; ++d)
                ms_c[l][d].push_back(std::move(subs[d]));
            ss_c[l].push_back(split.coarse);
            current = std::move(split.coarse);
        }
    }

    ContourletDecomposition dec;
    dec.original_h = img.height();
    dec.original_w = img.width();
    dec.config = cfg;
    dec.ms.resize(cfg.levels);
    dec.ss_chain.reserve(cfg.levels);
    for (int l = 0; l < cfg.levels; ++l) {
        dec.ms[l].reserve(cfg.num_directions);
        for (int d = 0; d < cfg.num_directions; ++d)
            dec.ms[l].push_back(merge_channels(ms_c[l][d]));
        dec.ss_chain.push_back(merge_channels(ss_c[l]));
    }
    dec.ss = dec.ss_chain.back();
    return dec;
}

ImageTensor ct_inverse(const ContourletDecomposition& dec) {
    dec.config.validate();
    const int levels = dec.levels();
    if (levels != dec.config.levels || static_cast<int>(dec.ss_chain.size()) != levels)
        throw ShapeError("decomposition level count does not match its config");
    const auto kernel = dec.config.kernel();
    const auto dims = level_input_dims(dec.original_h, dec.original_w, levels);

    // validate stored shapes against the ceil-halving chain
    for (int l = 0; l < levels; ++l) {
        const int ph = dims[l].h + dims[l].h % 2, pw = dims[l].w + dims[l].w % 2;
        if (static_cast<int>(dec.ms[l].size()) != dec.config.num_directions)
            throw ShapeError("level " + std::to_string(l + 1) + " direction count mismatch");
        for (const ImageTensor& band : dec.ms[l])
            if (band.height() != ph || band.width() != pw)
                throw ShapeError("level " + std::to_string(l + 1) + " subband dims mismatch");
        if (dec.ss_chain[l].height() != dims[l + 1].h || dec.ss_chain[l].width() != dims[l + 1].w)
            throw ShapeError("level " + std::to_string(l + 1) + " ss dims mismatch");
    }
    if (!dec.ss.same_shape(dec.ss_chain.back()))
        throw ShapeError("bottom ss does not match the ss chain");

    const int channels = dec.ss.channels();
    ImageTensor current = dec.ss;
    for (int l = levels - 1; l >= 0; --l) {
        const int ph = dims[l].h + dims[l].h % 2, pw = dims[l].w + dims[l].w % 2;
        auto bank = shared_wedge_bank(ph, pw, dec.config.num_directions, dec.config.transition_frac);

        std::vector<ImageTensor> planes;
        planes.reserve(channels);
        for (int ch = 0; ch < channels; ++ch) {
            std::vector<ImageTensor> subs;
            subs.reserve(dec.config.num_directions);
            for (const ImageTensor& band : dec.ms[l])
                subs.push_back(channels == 1 ? band : band.channel(ch));
            planes.push_back(dfb_synthesize(subs, *bank));
        }
        LpLevel level{current, merge_channels(planes)};
        current = lp_synthesize(level, kernel, dims[l].h, dims[l].w);
    }
    return current;
}

ImageTensor multi_pool(const ImageTensor& img, int factor) {
    if (!is_pow2(factor)) throw ConfigError("pool factor must be a power of two");
    const int h = img.height(), w = img.width(), c = img.channels();
    const int oh = (h + factor - 1) / factor, ow = (w + factor - 1) / factor;
    ImageTensor out(oh, ow, 2 * c);
    for (int oy = 0; oy < oh; ++oy)
        for (int ox = 0; ox < ow; ++ox)
            for (int ch = 0; ch < c; ++ch) {
                double sum = 0.0, mx = -1e300;
                for (int dy = 0; dy < factor; ++dy)
                    for (int dx = 0; dx < factor; ++dx) {
                        const double v = img.at(reflect_index(oy * factor + dy, h),
                                                reflect_index(ox * factor + dx, w), ch);
                        sum += v;
                        mx = std::max(mx, v);
                    }
                out.at(oy, ox, ch) = sum / (factor * factor);
                out.at(oy, ox, c + ch) = mx;
            }
    return out;
}

AggregateComponent aggregate_component(const ImageTensor& img,
                                       std::span<const ImageTensor> ss_chain_prefix,
                                       int level_index) {
    if (level_index < 1) throw ConfigError("level_index must be >= 1");
    if (static_cast<int>(ss_chain_prefix.size()) != level_index - 1)
        throw ShapeError("ss_chain_prefix must hold SS_1 .. SS_{i-1}");

    AggregateComponent agg;
    agg.level_index = level_index;

    auto append = [&](const ImageTensor& src, int factor, const std::string& label) {
        const ImageTensor pooled = multi_pool(src, factor);
        if (agg.channels == 0) {
            agg.height = pooled.height();
            agg.width = pooled.width();
        } else if (pooled.height() != agg.height || pooled.width() != agg.width) {
            throw ShapeError("source '" + label + "' cannot reach the level-" +
                             std::to_string(level_index) + " grid");
        }
        const int src_c = src.channels();
        for (int ch = 0; ch < pooled.channels(); ++ch) {
            const bool is_avg = ch < src_c;
            agg.source_manifest.push_back(label + ":c" + std::to_string(ch % src_c) +
                                          (is_avg ? ":avg" : ":max"));
        }
        // interleave the new planes after the existing ones
        const int new_c = agg.channels + pooled.channels();
        std::vector<double> merged(static_cast<size_t>(agg.height) * agg.width * new_c);
        for (int y = 0; y < agg.height; ++y)
            for (int x = 0; x < agg.width; ++x) {
                const size_t base = (static_cast<size_t>(y) * agg.width + x) * new_c;
                for (int ch = 0; ch < agg.channels; ++ch)
                    merged[base + ch] = agg.planes[(static_cast<size_t>(y) * agg.width + x) * agg.channels + ch];
                for (int ch = 0; ch < pooled.channels(); ++ch)
                    merged[base + agg.channels + ch] = pooled.at(y, x, ch);
            }
        agg.planes = std::move(merged);
        agg.channels = new_c;
    };

    append(img, 1 << (level_index - 1), "input");
    for (int j = 1; j < level_index; ++j)
        append(ss_chain_prefix[j - 1], 1 << (level_index - 1 - j), "ss" + std::to_string(j));
    return agg;
}

void serialize_decomposition(const ContourletDecomposition& dec,
                             const std::filesystem::path& dir) {
    dec.config.validate();
    std::filesystem::create_directories(dir);

    nlohmann::ordered_json manifest;
    manifest["format"] = "ctk-decomposition";
    manifest["version"] = 1;
    manifest["byte_order"] = "little-endian";
    manifest["checksum"] = "fnv1a64";
    manifest["original_height"] = dec.original_h;
    manifest["original_width"] = dec.original_w;
    manifest["config"] = {
        {"levels", dec.config.levels},
        {"num_directions", dec.config.num_directions},
        {"transition_frac", dec.config.transition_frac},
        {"lp_kernel", std::vector<double>(dec.config.kernel().begin(), dec.config.kernel().end())},
    };

    nlohmann::ordered_json bands = nlohmann::ordered_json::array();
    auto add_band = [&](const std::string& name, const ImageTensor& band,
                        const std::string& kind, int level, int direction) {
        const std::string file = name + ".ctsb";
        const std::string bytes = encode_band(band);
        write_file(dir / file, bytes);
        nlohmann::ordered_json entry;
        entry["name"] = name;
        entry["file"] = file;
        entry["kind"] = kind;
        entry["level"] = level;
        if (direction >= 0) entry["direction"] = direction;
        entry["height"] = band.height();
        entry["width"] = band.width();
        entry["channels"] = band.channels();
        entry["fnv1a64"] = hex64(fnv1a64(bytes));
        bands.push_back(std::move(entry));
    };

    for (int l = 0; l < dec.levels(); ++l) {
        for (int d = 0; d < static_cast<int>(dec.ms[l].size()); ++d)
            add_band("ms_l" + std::to_string(l + 1) + "_d" + std::to_string(d),
                     dec.ms[l][d], "ms", l + 1, d);
        add_band("ss_l" + std::to_string(l + 1), dec.ss_chain[l], "ss", l + 1, -1);
    }
    manifest["bands"] = std::move(bands);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

ContourletDecomposition deserialize_decomposition(const std::filesystem::path& dir) {
    nlohmann::json manifest;
    {
        std::ifstream in(dir / "manifest.json");
        if (!in) throw ManifestError("missing manifest.json in '" + dir.string() + "'");
        try {
            in >> manifest;
        } catch (const nlohmann::json::exception& e) {
            throw ManifestError(std::string("malformed manifest.json: ") + e.what());
        }
    }
    try {
        if (manifest.at("format") != "ctk-decomposition" || manifest.at("version") != 1)
            throw ManifestError("unrecognized manifest format/version");

        ContourletDecomposition dec;
        dec.original_h = manifest.at("original_height");
        dec.original_w = manifest.at("original_width");
        const auto& cfg = manifest.at("config");
        dec.config.levels = cfg.at("levels");
        dec.config.num_directions = cfg.at("num_directions");
        dec.config.transition_frac = cfg.at("transition_frac");
        dec.config.lp_kernel = cfg.at("lp_kernel").get<std::vector<double>>();
        dec.config.validate();

        dec.ms.assign(dec.config.levels, {});
        dec.ss_chain.resize(dec.config.levels);
        std::vector<std::vector<bool>> seen_ms(dec.config.levels,
                                               std::vector<bool>(dec.config.num_directions, false));
        std::vector<bool> seen_ss(dec.config.levels, false);
        for (auto& l : dec.ms) l.resize(dec.config.num_directions);

        for (const auto& entry : manifest.at("bands")) {
            const std::string name = entry.at("name");
            const std::string bytes = read_file(dir / std::string(entry.at("file")));
            if (hex64(fnv1a64(bytes)) != std::string(entry.at("fnv1a64")))
                throw FormatError("band '" + name + "': checksum mismatch");
            ImageTensor band = decode_band(bytes, name);
            if (band.height() != int(entry.at("height")) || band.width() != int(entry.at("width")) ||
                band.channels() != int(entry.at("channels")))
                throw FormatError("band '" + name + "': dims disagree with manifest");

            const int level = entry.at("level");
            if (level < 1 || level > dec.config.levels)
                throw ManifestError("band '" + name + "': level out of range");
            if (entry.at("kind") == "ss") {
                dec.ss_chain[level - 1] = std::move(band);
                seen_ss[level - 1] = true;
            } else {
                const int d = entry.at("direction");
                if (d < 0 || d >= dec.config.num_directions)
                    throw ManifestError("band '" + name + "': direction out of range");
                dec.ms[level - 1][d] = std::move(band);
                seen_ms[level - 1][d] = true;
            }
        }
        for (int l = 0; l < dec.config.levels; ++l) {
            if (!seen_ss[l]) throw ManifestError("manifest lacks ss band for level " + std::to_string(l + 1));
            for (int d = 0; d < dec.config.num_directions; ++d)
                if (!seen_ms[l][d])
                    throw ManifestError("manifest lacks ms band l" + std::to_string(l + 1) +
                                        " d" + std::to_string(d));
        }
        dec.ss = dec.ss_chain.back();
        return dec;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError(std::string("manifest field error: ") + e.what());
    }
}

} // namespace ctk
