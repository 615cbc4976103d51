#pragma once

#include "ctk/contourlet.hpp"
#include "ctk/image.hpp"

namespace ctk {

enum class CharbonnierGranularity { PerLevel, PerSubband };

struct LossConfig {
    double epsilon = 1e-3;
    double lambda1 = 1e-3; // perceptual weight
    double lambda2 = 1e-4; // adversarial weight
    CharbonnierGranularity granularity = CharbonnierGranularity::PerLevel;

    void validate() const {
        if (!(epsilon > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0))
            throw ConfigError("loss weights and epsilon must be positive");
    }
};

/// sqrt(diff_sq_norm + epsilon^2): smooth L1-like penalty floored at epsilon.
double charbonnier(double diff_sq_norm, double epsilon);

/// L2 norm of the bottom-SS difference plus one Charbonnier term per level
/// over that level's stacked MS difference (or per subband, by config).
double contourlet_loss(const ContourletDecomposition& pred, const ContourletDecomposition& gt,
                       const LossConfig& cfg);

/// log(d_real) + log(1 - d_fake): the GAN value function; sign conventions
/// for the min/max are the caller's.
double adversarial_loss_value(double d_real, double d_fake);

/// l_c + lambda1 * l_perceptual + lambda2 * l_adv.
double overall_loss(double l_c, double l_perceptual, double l_adv, const LossConfig& cfg);

struct ErrorMap {
    ImageTensor map;       // single channel: per-pixel channel-mean |input - gt|
    ImageTensor attentive; // input * map, broadcast over channels
};

ErrorMap error_map(const ImageTensor& input_img, const ImageTensor& gt);

} // namespace ctk
