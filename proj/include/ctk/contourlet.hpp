#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ctk/image.hpp"

namespace ctk {

/// Transform configuration. Defaults are 4 levels and 16 directions.
struct CtConfig {
    int levels = 4;
    int num_directions = 16;
    std::vector<double> lp_kernel; // empty = Burt-Adelson 5-tap
    double transition_frac = 0.3;

    std::span<const double> kernel() const;
    void validate() const;
};

/// Hierarchical contourlet decomposition: each level splits the current
/// semantic subband (SS) into a half-resolution SS and 2^k full-resolution
/// multi-direction subbands (MS) at that level's even-padded input shape.
struct ContourletDecomposition {
    ImageTensor ss;                           // bottom-level SS (== ss_chain.back())
    std::vector<std::vector<ImageTensor>> ms; // [level 0..L-1][direction]
    std::vector<ImageTensor> ss_chain;        // SS_1 .. SS_L
    int original_h = 0;
    int original_w = 0;
    CtConfig config;

    int levels() const { return static_cast<int>(ms.size()); }
};

ContourletDecomposition ct_forward(const ImageTensor& img, const CtConfig& cfg);
ImageTensor ct_inverse(const ContourletDecomposition& dec);

/// Channel-concatenation of average-pool and max-pool, window = stride =
/// factor (power of two; factor 1 duplicates the input). Dims are padded to a
/// multiple of factor by reflection. Output has 2x the input channels.
ImageTensor multi_pool(const ImageTensor& img, int factor);

/// Aggregate component at one level: the input and every earlier SS, each
/// multi-pooled down to the level's working resolution and channel-stacked.
struct AggregateComponent {
    int level_index = 0;
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> planes;               // row-major, interleaved channels
    std::vector<std::string> source_manifest; // one "<source>:<pool-op>" per plane
};

AggregateComponent aggregate_component(const ImageTensor& img,
                                       std::span<const ImageTensor> ss_chain_prefix,
                                       int level_index);

/// Directory format: manifest.json plus one .ctsb blob per band
/// (magic "CTSB", version u16, height u32, width u32, channels u16,
/// little-endian f32 samples, all little-endian). Reload error is bounded by
/// f32 quantization: <= 1e-7 max abs per band.
void serialize_decomposition(const ContourletDecomposition& dec,
                             const std::filesystem::path& dir);
ContourletDecomposition deserialize_decomposition(const std::filesystem::path& dir);

} // namespace ctk
