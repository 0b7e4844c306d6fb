#pragma once

#include "curvisynth/image.hpp"

#include <array>

namespace curvisynth {

/// Channel order of a LiotImage; fixed and recorded in tensor files.
enum class Direction { Left = 0, Right = 1, Top = 2, Bottom = 3 };

inline constexpr std::array<const char*, 4> kDirectionNames{"left", "right", "top", "bottom"};

/// Four 8-bit intensity-order channels, one per direction.
struct LiotImage {
    std::array<GrayImage, 4> channels;

    [[nodiscard]] const GrayImage& channel(Direction d) const { return channels[static_cast<int>(d)]; }

    friend bool operator==(const LiotImage&, const LiotImage&) = default;
};

/// For every pixel j and direction d, bit m-1 of channel d is set iff
/// X(j) > X(n), where n is the pixel m steps away along d (m = 1..8).
/// Neighbors past the border take the nearest edge pixel.
LiotImage liot_transform(const GrayImage& image);

} // namespace curvisynth
