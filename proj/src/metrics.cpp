#include "ctk/metrics.hpp"

#include <cmath>
#include <limits>

#include "ctk/color.hpp"

namespace ctk {
namespace {

constexpr int kWindow = 11;
constexpr double kWindowSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

void check_same_shape(const ImageTensor& a, const ImageTensor& b) {
    if (!a.same_shape(b)) throw ShapeError("metric inputs must share one shape");
}

const std::array<double, kWindow>& ssim_window() {
    static const std::array<double, kWindow> taps = [] {
        std::array<double, kWindow> t{};
        double sum = 0.0;
        for (int i = 0; i < kWindow; ++i) {
            const double d = i - (kWindow - 1) / 2.0;
            t[i] = std::exp(-0.5 * (d / kWindowSigma) * (d / kWindowSigma));
            sum += t[i];
        }
        for (double& v : t) v /= sum;
        return t;
    }();
    return taps;
}

// valid-mode separable gaussian filtering of a plane (h x w -> vh x vw)
std::vector<double> filter_valid(const std::vector<double>& in, int h, int w) {
    const auto& taps = ssim_window();
    const int vh = h - kWindow + 1, vw = w - kWindow + 1;
    std::vector<double> tmp(static_cast<size_t>(h) * vw);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += taps[k] * in[static_cast<size_t>(y) * w + x + k];
            tmp[static_cast<size_t>(y) * vw + x] = acc;
        }
    std::vector<double> out(static_cast<size_t>(vh) * vw);
    for (int y = 0; y < vh; ++y)
        for (int x = 0; x < vw; ++x) {
            double acc = 0.0;
            for (int k = 0; k < kWindow; ++k) acc += taps[k] * tmp[static_cast<size_t>(y + k) * vw + x];
            out[static_cast<size_t>(y) * vw + x] = acc;
        }
    return out;
}

} // namespace

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 32) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mse(const ImageTensor& a, const ImageTensor& b) {
    check_same_shape(a, b);
    std::vector<double> sq(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        sq[i] = d * d;
    }
    return pairwise_sum(sq) / static_cast<double>(a.size());
}

double psnr_from_mse(double mse_value, double peak) {
    if (mse_value < 0.0) throw DomainError("mse must be nonnegative");
    if (mse_value == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse_value);
}

double psnr(const ImageTensor& a, const ImageTensor& b, double peak) {
    return psnr_from_mse(mse(a, b), peak);
}

double ssim(const ImageTensor& a, const ImageTensor& b) {
    check_same_shape(a, b);
    if (a.height() < kWindow || a.width() < kWindow)
        throw ConfigError("ssim needs at least 11x11 pixels; resize the input");

    const ImageTensor la = to_luma(a), lb = to_luma(b);
    const int h = la.height(), w = la.width();
    const auto& xa = la.data();
    const auto& xb = lb.data();

    std::vector<double> aa(xa.size()), bb(xa.size()), ab(xa.size());
    for (size_t i = 0; i < xa.size(); ++i) {
        aa[i] = xa[i] * xa[i];
        bb[i] = xb[i] * xb[i];
        ab[i] = xa[i] * xb[i];
    }
    const auto mu_a = filter_valid(xa, h, w);
    const auto mu_b = filter_valid(xb, h, w);
    const auto m_aa = filter_valid(aa, h, w);
    const auto m_bb = filter_valid(bb, h, w);
    const auto m_ab = filter_valid(ab, h, w);

    constexpr double c1 = kK1 * kK1; // (K1 * L)^2 with L = 1
    constexpr double c2 = kK2 * kK2;
    std::vector<double> local(mu_a.size());
    for (size_t i = 0; i < mu_a.size(); ++i) {
        const double va = m_aa[i] - mu_a[i] * mu_a[i];
        const double vb = m_bb[i] - mu_b[i] * mu_b[i];
        const double cov = m_ab[i] - mu_a[i] * mu_b[i];
        local[i] = ((2.0 * mu_a[i] * mu_b[i] + c1) * (2.0 * cov + c2)) /
                   ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
    }
    return pairwise_sum(local) / static_cast<double>(local.size());
}

double ciede2000_lab(double l1, double a1, double b1, double l2, double a2, double b2) {
    const double c1 = std::hypot(a1, b1), c2 = std::hypot(a2, b2);
    const double cbar = (c1 + c2) / 2.0;
    const double cbar7 = std::pow(cbar, 7.0);
    constexpr double k25_7 = 6103515625.0; // 25^7
    const double g = 0.5 * (1.0 - std::sqrt(cbar7 / (cbar7 + k25_7)));
    const double ap1 = (1.0 + g) * a1, ap2 = (1.0 + g) * a2;
    const double cp1 = std::hypot(ap1, b1), cp2 = std::hypot(ap2, b2);

    auto hue = [](double ap, double b) {
        if (ap == 0.0 && b == 0.0) return 0.0;
        double h = std::atan2(b, ap) * (180.0 / M_PI);
        return h < 0.0 ? h + 360.0 : h;
    };
    const double hp1 = hue(ap1, b1), hp2 = hue(ap2, b2);

    const double dl = l2 - l1;
    const double dc = cp2 - cp1;
    double dhp = 0.0;
    if (cp1 * cp2 != 0.0) {
        dhp = hp2 - hp1;
        if (dhp > 180.0)
            dhp -= 360.0;
        else if (dhp < -180.0)
            dhp += 360.0;
    }
    const double dh = 2.0 * std::sqrt(cp1 * cp2) * std::sin(dhp * (M_PI / 360.0));

    const double lbar = (l1 + l2) / 2.0;
    const double cpbar = (cp1 + cp2) / 2.0;
    double hbar = hp1 + hp2;
    if (cp1 * cp2 != 0.0) {
        if (std::abs(hp1 - hp2) <= 180.0)
            hbar = (hp1 + hp2) / 2.0;
        else if (hp1 + hp2 < 360.0)
            hbar = (hp1 + hp2 + 360.0) / 2.0;
        else
            hbar = (hp1 + hp2 - 360.0) / 2.0;
    }
    const double t = 1.0 - 0.17 * std::cos((hbar - 30.0) * (M_PI / 180.0)) +
                     0.24 * std::cos(2.0 * hbar * (M_PI / 180.0)) +
                     0.32 * std::cos((3.0 * hbar + 6.0) * (M_PI / 180.0)) -
                     0.20 * std::cos((4.0 * hbar - 63.0) * (M_PI / 180.0));
    const double dtheta = 30.0 * std::exp(-((hbar - 275.0) / 25.0) * ((hbar - 275.0) / 25.0));
    const double cpbar7 = std::pow(cpbar, 7.0);
    const double rc = 2.0 * std::sqrt(cpbar7 / (cpbar7 + k25_7));
    const double sl = 1.0 + 0.015 * (lbar - 50.0) * (lbar - 50.0) /
                                std::sqrt(20.0 + (lbar - 50.0) * (lbar - 50.0));
    const double sc = 1.0 + 0.045 * cpbar;
    const double sh = 1.0 + 0.015 * cpbar * t;
    const double rt = -std::sin(2.0 * dtheta * (M_PI / 180.0)) * rc;

    const double tl = dl / sl, tc = dc / sc, th = dh / sh;
    return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

double ciede2000(const ImageTensor& a, const ImageTensor& b) {
    check_same_shape(a, b);
    if (a.channels() != 3) throw ShapeError("ciede2000 requires 3-channel sRGB inputs");
    const LabTensor la = to_lab(a), lb = to_lab(b);
    std::vector<double> de(static_cast<size_t>(a.height()) * a.width());
    size_t i = 0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            de[i++] = ciede2000_lab(la.l(y, x), la.a(y, x), la.b(y, x),
                                    lb.l(y, x), lb.a(y, x), lb.b(y, x));
    return pairwise_sum(de) / static_cast<double>(de.size());
}

MetricsReport compute_metrics(const ImageTensor& a, const ImageTensor& b) {
    check_same_shape(a, b);
    MetricsReport report;
    report.mse = mse(a, b);
    report.psnr = psnr_from_mse(report.mse);
    if (a.height() >= kWindow && a.width() >= kWindow) report.ssim = ssim(a, b);
    if (a.channels() == 3) report.ciede2000 = ciede2000(a, b);
    return report;
}

} // namespace ctk
