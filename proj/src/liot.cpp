#include "curvisynth/liot.hpp"

#include <algorithm>

namespace curvisynth {

LiotImage liot_transform(const GrayImage& image)
{
    if (image.channels != 1) {
        throw ValidationError("intensity-order transform expects a single-channel image");
    }
    const int h = image.height;
    const int w = image.width;
    LiotImage out;
    for (auto& c : out.channels) {
        c = GrayImage(h, w);
    }
    auto& left = out.channels[0].data;
    auto& right = out.channels[1].data;
    auto& top = out.channels[2].data;
    auto& bottom = out.channels[3].data;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto v = image.at(y, x);
            unsigned l = 0;
            unsigned r = 0;
            unsigned t = 0;
            unsigned b = 0;
            for (int m = 1; m <= 8; ++m) {
                const unsigned bit = 1u << (m - 1);
                if (v > image.at(y, std::max(x - m, 0))) {
                    l |= bit;
                }
                if (v > image.at(y, std::min(x + m, w - 1))) {
                    r |= bit;
                }
                if (v > image.at(std::max(y - m, 0), x)) {
                    t |= bit;
                }
                if (v > image.at(std::min(y + m, h - 1), x)) {
                    b |= bit;
                }
            }
            const std::size_t i = image.index(y, x);
            left[i] = static_cast<std::uint8_t>(l);
            right[i] = static_cast<std::uint8_t>(r);
            top[i] = static_cast<std::uint8_t>(t);
            bottom[i] = static_cast<std::uint8_t>(b);
        }
    }
    return out;
}

} // namespace curvisynth
