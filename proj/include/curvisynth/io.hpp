#pragma once

#include "curvisynth/image.hpp"
#include "curvisynth/liot.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvisynth {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes an 8-bit PNG. Palette and 16-bit inputs are converted to 8-bit;
/// the alpha channel is dropped. Result has 1 or 3 channels.
GrayImage read_png(const std::filesystem::path& path);

/// Encodes 1- or 3-channel 8-bit data. Output bytes depend only on pixels.
std::vector<unsigned char> encode_png(const GrayImage& image);
void write_png(const std::filesystem::path& path, const GrayImage& image);

/// Masks are stored as {0, 255}; reading maps any nonzero value to 1.
void write_mask_png(const std::filesystem::path& path, const Mask& mask);
Mask read_mask_png(const std::filesystem::path& path);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

// Packed tensor files. All integers are unsigned 32-bit little-endian and
// data is channel-major, then row-major.
//   "LIO1" H W C  then C*H*W bytes
//   "LF64" H W C  then C*H*W little-endian IEEE-754 doubles

/// Multi-channel planar tensor.
template <typename T>
struct Tensor {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<T> data;  // [c][y][x]

    [[nodiscard]] T at(int c, int y, int x) const
    {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
};

std::vector<unsigned char> encode_lio1(const Tensor<std::uint8_t>& t);
Tensor<std::uint8_t> decode_lio1(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> encode_lf64(const Tensor<double>& t);
Tensor<double> decode_lf64(const std::vector<unsigned char>& bytes);

Tensor<std::uint8_t> to_tensor(const LiotImage& liot);
void write_liot(const std::filesystem::path& path, const LiotImage& liot);
/// Writes <stem>_left.png ... <stem>_bottom.png next to `stem`.
void write_liot_pngs(const std::filesystem::path& stem, const LiotImage& liot);

/// Reads LIO1 (bytes scaled by 1/255) or LF64 as doubles.
Tensor<double> read_tensor(const std::filesystem::path& path);
void write_lf64(const std::filesystem::path& path, const Tensor<double>& t);

std::vector<unsigned char> read_file(const std::filesystem::path& path);

} // namespace curvisynth
