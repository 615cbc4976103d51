#include "ctk/image_io.hpp"

#include <png.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <vector>

namespace ctk {
namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void decode_fail(const std::filesystem::path& path, const std::string& why) {
    throw DecodeError("cannot decode '" + path.string() + "': " + why);
}

void quiet_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void quiet_warning(png_structp, png_const_charp) {}

// ---- PNG ----

ImageTensor load_png(std::FILE* fp, const std::filesystem::path& path) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, quiet_error, quiet_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("libpng allocation failed");
    }
    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> pixels;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        decode_fail(path, "corrupt or truncated PNG stream");
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    png_uint_32 w = 0, h = 0;
    int bit_depth = 0, color_type = 0;
    png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png); // pipeline is opaque-image only
    png_read_update_info(png, info);

    png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    int channels = png_get_channels(png, info);
    if ((bit_depth != 8 && bit_depth != 16) || (channels != 1 && channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        decode_fail(path, "unsupported bit depth or color type");
    }

    size_t stride = png_get_rowbytes(png, info);
    pixels.resize(stride * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = pixels.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    ImageTensor img(static_cast<int>(h), static_cast<int>(w), channels);
    const double maxval = bit_depth == 8 ? 255.0 : 65535.0;
    size_t di = 0;
    for (png_uint_32 y = 0; y < h; ++y) {
        const png_byte* row = pixels.data() + y * stride;
        if (bit_depth == 8) {
            for (size_t i = 0; i < static_cast<size_t>(w) * channels; ++i)
                img.data()[di++] = row[i] / maxval;
        } else {
            // PNG stores 16-bit samples big-endian
            for (size_t i = 0; i < static_cast<size_t>(w) * channels; ++i) {
                unsigned v = (static_cast<unsigned>(row[2 * i]) << 8) | row[2 * i + 1];
                img.data()[di++] = v / maxval;
            }
        }
    }
    return img;
}

void save_png(const ImageTensor& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot open '" + path.string() + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, quiet_error, quiet_warning);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to write '" + path.string() + "'");
    }
    png_init_io(png, fp.get());
    const int color = img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width(), img.height(), 8, color,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<size_t>(img.width()) * img.channels());
    for (int y = 0; y < img.height(); ++y) {
        size_t i = 0;
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < img.channels(); ++c)
                row[i++] = static_cast<png_byte>(clamp01(img.at(y, x, c)) * 255.0 + 0.5);
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// ---- Binary PNM (P5 gray / P6 RGB) ----

int pnm_token(std::FILE* fp, const std::filesystem::path& path) {
    int c = std::fgetc(fp);
    while (c != EOF) {
        if (c == '#') { // comment runs to end of line
            while (c != EOF && c != '\n') c = std::fgetc(fp);
        } else if (!std::isspace(c)) {
            break;
        }
        c = std::fgetc(fp);
    }
    if (c == EOF || !std::isdigit(c)) decode_fail(path, "malformed PNM header");
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 30) decode_fail(path, "PNM header value out of range");
        c = std::fgetc(fp);
    }
    return static_cast<int>(v);
}

ImageTensor load_pnm(std::FILE* fp, const std::filesystem::path& path, int channels) {
    int w = pnm_token(fp, path);
    int h = pnm_token(fp, path);
    int maxval = pnm_token(fp, path);
    if (w < 1 || h < 1) decode_fail(path, "bad PNM dimensions");
    if (maxval != 255 && maxval != 65535) decode_fail(path, "unsupported PNM maxval (need 255 or 65535)");

    size_t n = static_cast<size_t>(w) * h * channels;
    size_t bytes = maxval == 255 ? n : 2 * n;
    std::vector<uint8_t> raw(bytes);
    if (std::fread(raw.data(), 1, bytes, fp) != bytes) decode_fail(path, "truncated PNM payload");

    ImageTensor img(h, w, channels);
    const double divisor = maxval;
    if (maxval == 255) {
        for (size_t i = 0; i < n; ++i) img.data()[i] = raw[i] / divisor;
    } else {
        // 16-bit PNM samples are big-endian
        for (size_t i = 0; i < n; ++i) {
            unsigned v = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
            img.data()[i] = v / divisor;
        }
    }
    return img;
}

} // namespace

ImageTensor load_image(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw DecodeError("cannot open '" + path.string() + "' for reading");

    uint8_t magic[8] = {0};
    size_t got = std::fread(magic, 1, sizeof(magic), fp.get());
    static const uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (got == 8 && std::memcmp(magic, kPngSig, 8) == 0) {
        std::rewind(fp.get());
        return load_png(fp.get(), path);
    }
    if (got >= 2 && magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) {
        std::fseek(fp.get(), 2, SEEK_SET);
        return load_pnm(fp.get(), path, magic[1] == '5' ? 1 : 3);
    }
    decode_fail(path, "not a PNG or binary PNM file");
}

void save_image(const ImageTensor& img, const std::filesystem::path& path) {
    if (img.empty()) throw ShapeError("cannot save an empty image");
    if (img.channels() != 1 && img.channels() != 3)
        throw ShapeError("raster files carry 1 or 3 channels");
    save_png(img, path);
}

} // namespace ctk
