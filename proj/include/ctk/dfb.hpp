#pragma once

#include <memory>
#include <vector>

#include "ctk/image.hpp"

namespace ctk {

/// Frequency-domain directional windows for one raster size. The squared
/// windows sum to 1 at every bin (partition of unity), each window is real,
/// in [0,1], and symmetric under frequency negation, so direction subbands of
/// real inputs stay real and the bank inverts exactly.
struct WedgeBank {
    int num_directions = 0;
    int height = 0;
    int width = 0;
    double transition_frac = 0.0;
    std::vector<std::vector<double>> windows; // [direction][y * width + x]
};

/// Build the 2^k angular wedge bank. Wedge d is centered on the half-plane
/// angle pi*d/2^k measured from the vertical-frequency axis (so axis-aligned
/// sinusoids land in wedge interiors); neighbours crossfade with a raised
/// cosine over transition_frac of the wedge width. The DC bin is split evenly
/// in the squared sense: every direction gets 1/sqrt(2^k) there.
WedgeBank build_wedge_bank(int h, int w, int num_directions, double transition_frac = 0.3);

/// Cached immutable banks keyed by (h, w, directions, transition_frac).
std::shared_ptr<const WedgeBank> shared_wedge_bank(int h, int w, int num_directions,
                                                   double transition_frac);

/// subband_d = real(IDFT(window_d * DFT(band))); full resolution, no
/// downsampling. `band` must be single-channel with the bank's dims.
std::vector<ImageTensor> dfb_analyze(const ImageTensor& band, const WedgeBank& bank);

/// real(IDFT(sum_d window_d * DFT(subband_d))); exact inverse of dfb_analyze.
ImageTensor dfb_synthesize(const std::vector<ImageTensor>& subbands, const WedgeBank& bank);

} // namespace ctk
