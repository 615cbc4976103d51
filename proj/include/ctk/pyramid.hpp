#pragma once

#include <span>
#include <vector>

#include "ctk/image.hpp"

namespace ctk {

/// One Laplacian pyramid split. `coarse` is the half-resolution lowpass band
/// (the semantic-subband precursor); `residual` is the full-resolution highpass
/// band at the even-padded input shape and may be negative.
struct LpLevel {
    ImageTensor coarse;
    ImageTensor residual;
};

/// Burt-Adelson 5-tap lowpass (a = 0.4), DC gain 1.
std::span<const double> burt_kernel();

/// Reflect an index into [0, n) without repeating the edge sample.
int reflect_index(int i, int n);

/// Pad odd dims to even by one reflected row/column on the right/bottom.
ImageTensor pad_to_even(const ImageTensor& img);

/// Separable lowpass with symmetric boundary, then keep every second sample
/// (starting at 0) per axis. Kernel must have odd length and DC gain 1.
ImageTensor lp_reduce(const ImageTensor& img, std::span<const double> kernel);

/// Zero-insertion upsample to (target_h, target_w), then separable convolution
/// with the doubled kernel. Target dims must be 2n or 2n-1 per axis.
ImageTensor lp_expand(const ImageTensor& img, std::span<const double> kernel,
                      int target_h, int target_w);

/// coarse = reduce(padded), residual = padded - expand(coarse). The identity
/// padded = residual + expand(coarse) holds exactly by construction.
LpLevel lp_analyze(const ImageTensor& img, std::span<const double> kernel);

/// residual + expand(coarse), cropped to (target_h, target_w) to undo padding.
ImageTensor lp_synthesize(const LpLevel& level, std::span<const double> kernel,
                          int target_h, int target_w);

} // namespace ctk
