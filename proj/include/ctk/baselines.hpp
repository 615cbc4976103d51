#pragma once

#include "ctk/image.hpp"

namespace ctk {

/// Single-level orthonormal 2-D Haar quad. Bands are half resolution (of the
/// even-padded input); energy is conserved: ||x||^2 = sum of band energies.
struct DwtQuad {
    ImageTensor ll, lh, hl_band, hh;
    int original_h = 0;
    int original_w = 0;
};

DwtQuad dwt_haar_forward(const ImageTensor& img);
ImageTensor dwt_haar_inverse(const DwtQuad& quad);

/// Additive high/low split: low = gaussian blur, high = input - low.
struct HlPair {
    ImageTensor low, high;
};

HlPair hl_split(const ImageTensor& img, double sigma = 2.0);
ImageTensor hl_merge(const HlPair& pair);

/// The blur used by hl_split: truncated at 4*sigma, renormalized to DC gain 1,
/// symmetric boundary.
ImageTensor gaussian_blur(const ImageTensor& img, double sigma);

} // namespace ctk
