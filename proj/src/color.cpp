#include "ctk/color.hpp"

#include <cmath>

namespace ctk {
namespace {

double srgb_to_linear(double u) {
    return u <= 0.04045 ? u / 12.92 : std::pow((u + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    if (t > delta * delta * delta) return std::cbrt(t);
    return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

// D65 reference white (2deg observer)
constexpr double kXn = 0.95047;
constexpr double kYn = 1.0;
constexpr double kZn = 1.08883;

} // namespace

void srgb_to_lab(double r, double g, double b, double& L, double& a, double& bb) {
    const double rl = srgb_to_linear(r);
    const double gl = srgb_to_linear(g);
    const double bl = srgb_to_linear(b);
    const double x = 0.4124564 * rl + 0.3575761 * gl + 0.1804375 * bl;
    const double y = 0.2126729 * rl + 0.7151522 * gl + 0.0721750 * bl;
    const double z = 0.0193339 * rl + 0.1191920 * gl + 0.9503041 * bl;
    const double fx = lab_f(x / kXn);
    const double fy = lab_f(y / kYn);
    const double fz = lab_f(z / kZn);
    L = 116.0 * fy - 16.0;
    a = 500.0 * (fx - fy);
    bb = 200.0 * (fy - fz);
}

LabTensor to_lab(const ImageTensor& img) {
    if (img.channels() != 3) throw ShapeError("to_lab requires a 3-channel sRGB image");
    LabTensor lab;
    lab.height = img.height();
    lab.width = img.width();
    lab.data.resize(img.size());
    size_t i = 0;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double L, a, b;
            srgb_to_lab(img.at(y, x, 0), img.at(y, x, 1), img.at(y, x, 2), L, a, b);
            lab.data[i++] = L;
            lab.data[i++] = a;
            lab.data[i++] = b;
        }
    }
    return lab;
}

ImageTensor to_luma(const ImageTensor& img) {
    if (img.channels() == 1) return img;
    if (img.channels() != 3) throw ShapeError("to_luma expects 1 or 3 channels");
    ImageTensor out(img.height(), img.width(), 1);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            out.at(y, x) = 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) + 0.114 * img.at(y, x, 2);
    return out;
}

} // namespace ctk
