#pragma once

#include <filesystem>

#include "ctk/image.hpp"

namespace ctk {

/// Load a PNG (8/16-bit, gray or RGB; palette expanded, alpha dropped) or a
/// binary PPM/PGM (P5/P6, maxval 255 or 65535). Samples are scaled to [0,1].
ImageTensor load_image(const std::filesystem::path& path);

/// Write an 8-bit PNG. Samples are clamped to [0,1] before quantization, so a
/// reloaded image differs from clamp(img) by at most 1/255 per sample.
void save_image(const ImageTensor& img, const std::filesystem::path& path);

} // namespace ctk
