#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "ctk/error.hpp"

namespace ctk {

/// Dense H x W x C raster of doubles, row-major with interleaved channels.
/// Images use the nominal range [0,1]; subbands and residuals may be negative.
class ImageTensor {
public:
    ImageTensor() = default;

    ImageTensor(int height, int width, int channels)
        : height_(height), width_(width), channels_(channels),
          data_(static_cast<size_t>(check_dims(height, width, channels)), 0.0) {}

    ImageTensor(int height, int width, int channels, std::vector<double> data)
        : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
        if (data_.size() != static_cast<size_t>(check_dims(height, width, channels)))
            throw ShapeError("image data length does not match height*width*channels");
    }

    static ImageTensor constant(int height, int width, int channels, double value) {
        ImageTensor img(height, width, channels);
        for (double& v : img.data_) v = value;
        return img;
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }
    size_t size() const { return data_.size(); }

    double& at(int y, int x, int c = 0) { return data_[index(y, x, c)]; }
    double at(int y, int x, int c = 0) const { return data_[index(y, x, c)]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const ImageTensor& other) const {
        return height_ == other.height_ && width_ == other.width_ && channels_ == other.channels_;
    }

    /// Extract channel c as a single-channel image.
    ImageTensor channel(int c) const;
    /// Overwrite channel c from a single-channel image of matching dims.
    void set_channel(int c, const ImageTensor& plane);

    ImageTensor cropped(int new_h, int new_w) const;

private:
    size_t index(int y, int x, int c) const {
        return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
    }

    // Images proper carry 1 or 3 channels (enforced at the I/O and color
    // boundaries); pooled plane stacks may carry more.
    static long long check_dims(int h, int w, int c) {
        if (h < 1 || w < 1) throw ShapeError("image dimensions must be at least 1x1");
        if (c < 1) throw ShapeError("channel count must be at least 1");
        return static_cast<long long>(h) * w * c;
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// Same layout as ImageTensor; channels = 3 meaning CIE L*, a*, b* under D65/2deg.
struct LabTensor {
    int height = 0;
    int width = 0;
    std::vector<double> data; // row-major, 3 interleaved channels

    double l(int y, int x) const { return data[(static_cast<size_t>(y) * width + x) * 3 + 0]; }
    double a(int y, int x) const { return data[(static_cast<size_t>(y) * width + x) * 3 + 1]; }
    double b(int y, int x) const { return data[(static_cast<size_t>(y) * width + x) * 3 + 2]; }
};

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

} // namespace ctk
