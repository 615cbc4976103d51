#pragma once

#include <optional>
#include <span>

#include "ctk/image.hpp"

namespace ctk {

struct MetricsReport {
    double mse = 0.0;
    double psnr = 0.0; // +infinity when mse == 0
    std::optional<double> ssim;      // absent when the image is below the window size
    std::optional<double> ciede2000; // absent for gray inputs
};

/// Fixed-tree pairwise reduction; platform-stable summation order.
double pairwise_sum(std::span<const double> values);

double mse(const ImageTensor& a, const ImageTensor& b);

double psnr_from_mse(double mse_value, double peak = 1.0);
double psnr(const ImageTensor& a, const ImageTensor& b, double peak = 1.0);

/// Mean local SSIM on luma: 11x11 gaussian window (sigma 1.5), K1=0.01,
/// K2=0.03, dynamic range 1, valid windows only (no padding). Requires
/// min(h, w) >= 11.
double ssim(const ImageTensor& a, const ImageTensor& b);

/// Mean per-pixel CIEDE2000 (kL=kC=kH=1) between sRGB images.
double ciede2000(const ImageTensor& a, const ImageTensor& b);

/// Lab-level entry point; lets tests drive the formula directly from
/// published verification pairs without the sRGB conversion.
double ciede2000_lab(double l1, double a1, double b1, double l2, double a2, double b2);

/// Full report; ssim/ciede2000 omitted where not applicable.
MetricsReport compute_metrics(const ImageTensor& a, const ImageTensor& b);

} // namespace ctk
