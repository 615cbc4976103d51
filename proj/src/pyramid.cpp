#include "ctk/pyramid.hpp"

#include <cmath>

namespace ctk {
namespace {

constexpr double kBurt[5] = {0.05, 0.25, 0.40, 0.25, 0.05};

void check_kernel(std::span<const double> kernel) {
    if (kernel.empty() || kernel.size() % 2 == 0)
        throw ConfigError("lowpass kernel must have odd length");
    double sum = 0.0;
    for (double t : kernel) sum += t;
    if (std::abs(sum - 1.0) > 1e-12)
        throw ConfigError("lowpass kernel must have DC gain 1");
}

// Symmetric-boundary separable convolution (no kernel validation; expand uses
// a doubled kernel whose DC gain is 2).
ImageTensor convolve_separable(const ImageTensor& img, std::span<const double> kernel) {
    const int h = img.height(), w = img.width(), c = img.channels();
    const int r = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(img.size()), out(img.size());

    const auto& in = img.data();
    for (int y = 0; y < h; ++y) { // along x
        const size_t row = static_cast<size_t>(y) * w * c;
        for (int x = 0; x < w; ++x)
            for (int ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int k = -r; k <= r; ++k)
                    acc += kernel[k + r] * in[row + static_cast<size_t>(reflect_index(x + k, w)) * c + ch];
                tmp[row + static_cast<size_t>(x) * c + ch] = acc;
            }
    }
    const size_t pitch = static_cast<size_t>(w) * c;
    for (int x = 0; x < w; ++x) { // along y
        for (int ch = 0; ch < c; ++ch) {
            const size_t col = static_cast<size_t>(x) * c + ch;
            for (int y = 0; y < h; ++y) {
                double acc = 0.0;
                for (int k = -r; k <= r; ++k)
                    acc += kernel[k + r] * tmp[col + static_cast<size_t>(reflect_index(y + k, h)) * pitch];
                out[col + static_cast<size_t>(y) * pitch] = acc;
            }
        }
    }
    return ImageTensor(h, w, c, std::move(out));
}

} // namespace

std::span<const double> burt_kernel() { return {kBurt, 5}; }

int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i = i % period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

ImageTensor pad_to_even(const ImageTensor& img) {
    const int h = img.height(), w = img.width(), c = img.channels();
    const int ph = h + (h % 2), pw = w + (w % 2);
    if (ph == h && pw == w) return img;
    ImageTensor out(ph, pw, c);
    for (int y = 0; y < ph; ++y) {
        const int sy = reflect_index(y, h);
        for (int x = 0; x < pw; ++x) {
            const int sx = reflect_index(x, w);
            for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = img.at(sy, sx, ch);
        }
    }
    return out;
}

ImageTensor lp_reduce(const ImageTensor& img, std::span<const double> kernel) {
    check_kernel(kernel);
    const ImageTensor smooth = convolve_separable(img, kernel);
    const int oh = (img.height() + 1) / 2, ow = (img.width() + 1) / 2;
    ImageTensor out(oh, ow, img.channels());
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x)
            for (int c = 0; c < img.channels(); ++c)
                out.at(y, x, c) = smooth.at(2 * y, 2 * x, c);
    return out;
}

ImageTensor lp_expand(const ImageTensor& img, std::span<const double> kernel,
                      int target_h, int target_w) {
    check_kernel(kernel);
    const int h = img.height(), w = img.width(), c = img.channels();
    if (target_h != 2 * h && target_h != 2 * h - 1)
        throw ShapeError("expand target height must be 2n or 2n-1");
    if (target_w != 2 * w && target_w != 2 * w - 1)
        throw ShapeError("expand target width must be 2n or 2n-1");

    ImageTensor up(target_h, target_w, c); // zero-inserted grid
    for (int y = 0; y < h && 2 * y < target_h; ++y)
        for (int x = 0; x < w && 2 * x < target_w; ++x)
            for (int ch = 0; ch < c; ++ch)
                up.at(2 * y, 2 * x, ch) = img.at(y, x, ch);

    std::vector<double> doubled(kernel.begin(), kernel.end());
    for (double& t : doubled) t *= 2.0; // gain compensation for zero insertion
    return convolve_separable(up, doubled);
}

LpLevel lp_analyze(const ImageTensor& img, std::span<const double> kernel) {
    const ImageTensor padded = pad_to_even(img);
    LpLevel level;
    level.coarse = lp_reduce(padded, kernel);
    level.residual = lp_expand(level.coarse, kernel, padded.height(), padded.width());
    for (size_t i = 0; i < padded.size(); ++i)
        level.residual.data()[i] = padded.data()[i] - level.residual.data()[i];
    return level;
}

ImageTensor lp_synthesize(const LpLevel& level, std::span<const double> kernel,
                          int target_h, int target_w) {
    const ImageTensor& res = level.residual;
    if (res.channels() != level.coarse.channels())
        throw ShapeError("coarse/residual channel mismatch");
    ImageTensor expanded = lp_expand(level.coarse, kernel, res.height(), res.width());
    for (size_t i = 0; i < expanded.size(); ++i)
        expanded.data()[i] += res.data()[i];
    return expanded.cropped(target_h, target_w);
}

} // namespace ctk
