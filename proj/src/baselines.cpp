#include "ctk/baselines.hpp"

#include <cmath>

#include "ctk/pyramid.hpp"

namespace ctk {

DwtQuad dwt_haar_forward(const ImageTensor& img) {
    const ImageTensor padded = pad_to_even(img);
    const int hh2 = padded.height() / 2, hw2 = padded.width() / 2, c = padded.channels();
    DwtQuad quad;
    quad.original_h = img.height();
    quad.original_w = img.width();
    quad.ll = ImageTensor(hh2, hw2, c);
    quad.lh = ImageTensor(hh2, hw2, c);
    quad.hl_band = ImageTensor(hh2, hw2, c);
    quad.hh = ImageTensor(hh2, hw2, c);
    for (int y = 0; y < hh2; ++y)
        for (int x = 0; x < hw2; ++x)
            for (int ch = 0; ch < c; ++ch) {
                const double a = padded.at(2 * y, 2 * x, ch);
                const double b = padded.at(2 * y, 2 * x + 1, ch);
                const double d = padded.at(2 * y + 1, 2 * x, ch);
                const double e = padded.at(2 * y + 1, 2 * x + 1, ch);
                quad.ll.at(y, x, ch) = (a + b + d + e) / 2.0;
                quad.lh.at(y, x, ch) = (a - b + d - e) / 2.0;
                quad.hl_band.at(y, x, ch) = (a + b - d - e) / 2.0;
                quad.hh.at(y, x, ch) = (a - b - d + e) / 2.0;
            }
    return quad;
}

ImageTensor dwt_haar_inverse(const DwtQuad& quad) {
    if (!quad.ll.same_shape(quad.lh) || !quad.ll.same_shape(quad.hl_band) ||
        !quad.ll.same_shape(quad.hh))
        throw ShapeError("haar quad bands must share one shape");
    const int hh2 = quad.ll.height(), hw2 = quad.ll.width(), c = quad.ll.channels();
    ImageTensor out(2 * hh2, 2 * hw2, c);
    for (int y = 0; y < hh2; ++y)
        for (int x = 0; x < hw2; ++x)
            for (int ch = 0; ch < c; ++ch) {
                const double ll = quad.ll.at(y, x, ch);
                const double lh = quad.lh.at(y, x, ch);
                const double hl = quad.hl_band.at(y, x, ch);
                const double hh = quad.hh.at(y, x, ch);
                out.at(2 * y, 2 * x, ch) = (ll + lh + hl + hh) / 2.0;
                out.at(2 * y, 2 * x + 1, ch) = (ll - lh + hl - hh) / 2.0;
                out.at(2 * y + 1, 2 * x, ch) = (ll + lh - hl - hh) / 2.0;
                out.at(2 * y + 1, 2 * x + 1, ch) = (ll - lh - hl + hh) / 2.0;
            }
    if (quad.original_h > 0 && quad.original_w > 0)
        return out.cropped(quad.original_h, quad.original_w);
    return out;
}

ImageTensor gaussian_blur(const ImageTensor& img, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("gaussian sigma must be positive");
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    std::vector<double> taps(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        taps[k + radius] = std::exp(-0.5 * (k / sigma) * (k / sigma));
        sum += taps[k + radius];
    }
    for (double& t : taps) t /= sum;

    const int h = img.height(), w = img.width(), c = img.channels();
    ImageTensor tmp(h, w, c), out(h, w, c);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k)
                    acc += taps[k + radius] * img.at(y, reflect_index(x + k, w), ch);
                tmp.at(y, x, ch) = acc;
            }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k)
                    acc += taps[k + radius] * tmp.at(reflect_index(y + k, h), x, ch);
                out.at(y, x, ch) = acc;
            }
    return out;
}

HlPair hl_split(const ImageTensor& img, double sigma) {
    HlPair pair;
    pair.low = gaussian_blur(img, sigma);
    pair.high = img;
    for (size_t i = 0; i < img.size(); ++i) pair.high.data()[i] -= pair.low.data()[i];
    return pair;
}

ImageTensor hl_merge(const HlPair& pair) {
    if (!pair.low.same_shape(pair.high)) throw ShapeError("hl pair bands must share one shape");
    ImageTensor out = pair.low;
    for (size_t i = 0; i < out.size(); ++i) out.data()[i] += pair.high.data()[i];
    return out;
}

} // namespace ctk
