#include "ctk/image.hpp"

namespace ctk {

ImageTensor ImageTensor::channel(int c) const {
    if (c < 0 || c >= channels_) throw ShapeError("channel index out of range");
    ImageTensor out(height_, width_, 1);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            out.at(y, x) = at(y, x, c);
    return out;
}

void ImageTensor::set_channel(int c, const ImageTensor& plane) {
    if (c < 0 || c >= channels_) throw ShapeError("channel index out of range");
    if (plane.height() != height_ || plane.width() != width_ || plane.channels() != 1)
        throw ShapeError("channel plane dims do not match");
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            at(y, x, c) = plane.at(y, x);
}

ImageTensor ImageTensor::cropped(int new_h, int new_w) const {
    if (new_h < 1 || new_w < 1 || new_h > height_ || new_w > width_)
        throw ShapeError("crop dims exceed image dims");
    if (new_h == height_ && new_w == width_) return *this;
    ImageTensor out(new_h, new_w, channels_);
    for (int y = 0; y < new_h; ++y)
        for (int x = 0; x < new_w; ++x)
            for (int c = 0; c < channels_; ++c)
                out.at(y, x, c) = at(y, x, c);
    return out;
}

} // namespace ctk
