#pragma once

#include "curvisynth/fourier.hpp"
#include "curvisynth/image.hpp"
#include "curvisynth/raster.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace curvisynth {

/// Side of the DC-centered swap window: floor(beta * min(H, W)).
int swap_window_side(int height, int width, double beta);

/// True if the natural-order DFT index (u, v) lies in the swap window.
bool in_swap_window(int u, int v, int height, int width, double beta);

/// Returns src coefficients with their amplitude replaced by tgt's inside
/// the low-frequency window; src phase is kept everywhere.
ComplexImage swap_low_frequency(const ComplexImage& src, const ComplexImage& tgt, double beta);

/// Swapped image before clamping (real part of the inverse transform).
RealImage amplitude_swap_unclamped(const RealImage& src, const RealImage& tgt, double beta);

/// Swapped image clamped to [0, 255]. beta must lie in [0, 1); beta = 0 is
/// accepted as the empty-window limit.
RealImage amplitude_swap(const RealImage& src, const RealImage& tgt, double beta);

/// Normalized 1-D Gaussian taps, length ksize.
std::vector<double> gaussian_kernel(int ksize, double sigma);

/// Separable Gaussian convolution with mirror borders that do not repeat
/// the edge pixel (dcb|abcd|cba). ksize must be odd.
RealImage gaussian_blur(const RealImage& image, int ksize, double sigma);

struct SynthParams {
    double beta = 0.3;
    int ksize = 13;
    double sigma = 2.0;
};

struct SynthPair {
    GrayImage image;
    Mask mask;  // copied from the fractal, untouched
    std::string target_id;
    std::uint64_t seed = 0;
};

/// quantize(blur(amplitude swap)). The swap result is blurred in
/// floating point and clamped once at the end.
SynthPair synthesize(const FractalImage& frac, const GrayImage& target, const SynthParams& params,
                     std::string target_id = {}, std::uint64_t seed = 0);

} // namespace curvisynth
