#include "ctk/losses.hpp"

#include <cmath>

#include "ctk/metrics.hpp"

namespace ctk {
namespace {

double sq_norm_diff(const ImageTensor& a, const ImageTensor& b) {
    if (!a.same_shape(b)) throw ShapeError("loss bands must share one shape");
    std::vector<double> sq(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        sq[i] = d * d;
    }
    return pairwise_sum(sq);
}

} // namespace

double charbonnier(double diff_sq_norm, double epsilon) {
    if (diff_sq_norm < 0.0) throw DomainError("squared norm must be nonnegative");
    return std::sqrt(diff_sq_norm + epsilon * epsilon);
}

double contourlet_loss(const ContourletDecomposition& pred, const ContourletDecomposition& gt,
                       const LossConfig& cfg) {
    cfg.validate();
    if (pred.levels() != gt.levels() || pred.config.num_directions != gt.config.num_directions)
        throw ShapeError("decompositions must share levels and direction counts");

    double loss = std::sqrt(sq_norm_diff(pred.ss, gt.ss));
    for (int l = 0; l < pred.levels(); ++l) {
        if (pred.ms[l].size() != gt.ms[l].size())
            throw ShapeError("direction count mismatch at level " + std::to_string(l + 1));
        if (cfg.granularity == CharbonnierGranularity::PerLevel) {
            double level_sq = 0.0;
            for (size_t d = 0; d < pred.ms[l].size(); ++d)
                level_sq += sq_norm_diff(pred.ms[l][d], gt.ms[l][d]);
            loss += charbonnier(level_sq, cfg.epsilon);
        } else {
            for (size_t d = 0; d < pred.ms[l].size(); ++d)
                loss += charbonnier(sq_norm_diff(pred.ms[l][d], gt.ms[l][d]), cfg.epsilon);
        }
    }
    return loss;
}

double adversarial_loss_value(double d_real, double d_fake) {
    if (!(d_real > 0.0) || !(d_real < 1.0) || !(d_fake > 0.0) || !(d_fake < 1.0))
        throw DomainError("discriminator outputs must lie in (0, 1)");
    return std::log(d_real) + std::log(1.0 - d_fake);
}

double overall_loss(double l_c, double l_perceptual, double l_adv, const LossConfig& cfg) {
    cfg.validate();
    return l_c + cfg.lambda1 * l_perceptual + cfg.lambda2 * l_adv;
}

ErrorMap error_map(const ImageTensor& input_img, const ImageTensor& gt) {
    if (!input_img.same_shape(gt)) throw ShapeError("error map inputs must share one shape");
    ErrorMap out;
    out.map = ImageTensor(input_img.height(), input_img.width(), 1);
    for (int y = 0; y < input_img.height(); ++y)
        for (int x = 0; x < input_img.width(); ++x) {
            double acc = 0.0;
            for (int c = 0; c < input_img.channels(); ++c)
                acc += std::abs(input_img.at(y, x, c) - gt.at(y, x, c));
            out.map.at(y, x) = acc / input_img.channels();
        }
    out.attentive = input_img;
    for (int y = 0; y < input_img.height(); ++y)
        for (int x = 0; x < input_img.width(); ++x)
            for (int c = 0; c < input_img.channels(); ++c)
                out.attentive.at(y, x, c) = input_img.at(y, x, c) * out.map.at(y, x);
    return out;
}

} // namespace ctk
