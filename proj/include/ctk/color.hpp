#pragma once

#include "ctk/image.hpp"

namespace ctk {

/// sRGB -> CIE L*a*b* under D65/2deg, exact piecewise sRGB transfer function.
LabTensor to_lab(const ImageTensor& img);

/// Single Lab triple from one sRGB triple (same pipeline as to_lab).
void srgb_to_lab(double r, double g, double b, double& L, double& a, double& bb);

/// Identity for 1-channel input; Rec.601 weights (0.299, 0.587, 0.114) for RGB.
ImageTensor to_luma(const ImageTensor& img);

} // namespace ctk
