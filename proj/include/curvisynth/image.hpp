#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvisynth {

/// Raised when an input violates an operation's preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense row-major image with interleaved channels.
template <typename T>
struct Image {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<T> data;

    Image() = default;
    Image(int h, int w, int c = 1, T fill = T{})
        : height(h), width(w), channels(c),
          data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w) * static_cast<std::size_t>(c), fill)
    {
        if (h < 0 || w < 0 || c < 1) {
            throw ValidationError("image dimensions must be non-negative with at least one channel");
        }
    }

    [[nodiscard]] std::size_t pixel_count() const
    {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    }
    [[nodiscard]] bool empty() const { return height == 0 || width == 0; }

    [[nodiscard]] std::size_t index(int y, int x, int c = 0) const
    {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)) *
                   static_cast<std::size_t>(channels) +
               static_cast<std::size_t>(c);
    }

    T& at(int y, int x, int c = 0) { return data[index(y, x, c)]; }
    const T& at(int y, int x, int c = 0) const { return data[index(y, x, c)]; }

    [[nodiscard]] bool same_shape(const Image& other) const
    {
        return height == other.height && width == other.width && channels == other.channels;
    }

    friend bool operator==(const Image&, const Image&) = default;
};

using GrayImage = Image<std::uint8_t>;
using RealImage = Image<double>;

/// Binary masks store 0 or 1 per pixel. Files on disk use {0,255}.
using Mask = Image<std::uint8_t>;

inline RealImage to_real(const GrayImage& img)
{
    RealImage out(img.height, img.width, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = static_cast<double>(img.data[i]);
    }
    return out;
}

/// Rounds half away from zero and clamps into [0, 255].
inline std::uint8_t quantize(double v)
{
    if (!(v > 0.0)) {
        return 0;
    }
    if (v >= 255.0) {
        return 255;
    }
    return static_cast<std::uint8_t>(v + 0.5);
}

inline GrayImage to_gray8(const RealImage& img)
{
    GrayImage out(img.height, img.width, img.channels);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = quantize(img.data[i]);
    }
    return out;
}

/// How multi-channel images are reduced to one channel.
enum class GrayMode { Luma, Green };

/// Converts an RGB(A) or gray image to a single channel.
/// Luma uses the ITU-R BT.601 weights 0.299, 0.587, 0.114.
GrayImage to_single_channel(const GrayImage& img, GrayMode mode = GrayMode::Luma);

/// Copies the window [y, y+h) x [x, x+w); must lie inside the image.
template <typename T>
Image<T> crop(const Image<T>& img, int y, int x, int h, int w)
{
    if (y < 0 || x < 0 || h < 0 || w < 0 || y + h > img.height || x + w > img.width) {
        throw ValidationError("crop window exceeds image bounds");
    }
    Image<T> out(h, w, img.channels);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            for (int k = 0; k < img.channels; ++k) {
                out.at(r, c, k) = img.at(y + r, x + c, k);
            }
        }
    }
    return out;
}

/// Bilinear resampling with pixel-center alignment.
GrayImage resize_bilinear(const GrayImage& img, int height, int width);

} // namespace curvisynth
