#include "curvisynth/image.hpp"

#include <algorithm>
#include <cmath>

namespace curvisynth {

GrayImage to_single_channel(const GrayImage& img, GrayMode mode)
{
    if (img.channels == 1) {
        return img;
    }
    if (img.channels < 3) {
        // gray + alpha
        GrayImage out(img.height, img.width);
        for (std::size_t i = 0; i < out.data.size(); ++i) {
            out.data[i] = img.data[i * static_cast<std::size_t>(img.channels)];
        }
        return out;
    }
    GrayImage out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (mode == GrayMode::Green) {
                out.at(y, x) = img.at(y, x, 1);
            } else {
                out.at(y, x) = quantize(0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) + 0.114 * img.at(y, x, 2));
            }
        }
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int height, int width)
{
    if (img.empty() || height < 1 || width < 1) {
        throw ValidationError("resize needs non-empty source and target sizes");
    }
    GrayImage out(height, width, img.channels);
    const double sy = static_cast<double>(img.height) / height;
    const double sx = static_cast<double>(img.width) / width;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double ty = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double tx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(y0, x0, c) * (1 - tx) + img.at(y0, x1, c) * tx;
                const double bot = img.at(y1, x0, c) * (1 - tx) + img.at(y1, x1, c) * tx;
                out.at(y, x, c) = quantize(top * (1 - ty) + bot * ty);
            }
        }
    }
    return out;
}

} // namespace curvisynth
