#include "curvisynth/fda.hpp"

#include <algorithm>
#include <cmath>

namespace curvisynth {

namespace {

void check_beta(double beta)
{
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw ValidationError("beta must lie in (0, 1)");
    }
}

// Mirror index for borders: -1 -> 1, n -> n-2. Repeats for tiny images.
int reflect101(int i, int n)
{
    if (n == 1) {
        return 0;
    }
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) {
        i += period;
    }
    return i < n ? i : period - i;
}

} // namespace

int swap_window_side(int height, int width, double beta)
{
    check_beta(beta);
    return static_cast<int>(std::floor(beta * std::min(height, width)));
}

bool in_swap_window(int u, int v, int height, int width, double beta)
{
    const int side = swap_window_side(height, width, beta);
    if (side == 0) {
        return false;
    }
    // Centered coordinates place DC at (H/2, W/2); the window spans
    // [center - side/2, center - side/2 + side).
    const int cu = (u + height / 2) % height;
    const int cv = (v + width / 2) % width;
    const int u0 = height / 2 - side / 2;
    const int v0 = width / 2 - side / 2;
    return cu >= u0 && cu < u0 + side && cv >= v0 && cv < v0 + side;
}

ComplexImage swap_low_frequency(const ComplexImage& src, const ComplexImage& tgt, double beta)
{
    if (src.height != tgt.height || src.width != tgt.width) {
        throw ValidationError("amplitude swap: source and target dimensions differ");
    }
    check_beta(beta);
    ComplexImage out = src;
    const int side = swap_window_side(src.height, src.width, beta);
    if (side == 0) {
        return out;
    }
    const int u0 = src.height / 2 - side / 2;
    const int v0 = src.width / 2 - side / 2;
    for (int cu = u0; cu < u0 + side; ++cu) {
        const int u = unshift_index(cu, src.height);
        for (int cv = v0; cv < v0 + side; ++cv) {
            const int v = unshift_index(cv, src.width);
            out.at(u, v) = std::polar(std::abs(tgt.at(u, v)), std::arg(src.at(u, v)));
        }
    }
    return out;
}

RealImage amplitude_swap_unclamped(const RealImage& src, const RealImage& tgt, double beta)
{
    if (!src.same_shape(tgt) || src.channels != 1) {
        throw ValidationError("amplitude swap: source and target must be single-channel with equal dimensions");
    }
    check_beta(beta);
    if (swap_window_side(src.height, src.width, beta) == 0) {
        return src;
    }
    return ifft2_real(swap_low_frequency(dft2(src), dft2(tgt), beta));
}

RealImage amplitude_swap(const RealImage& src, const RealImage& tgt, double beta)
{
    RealImage out = amplitude_swap_unclamped(src, tgt, beta);
    for (auto& v : out.data) {
        v = std::clamp(v, 0.0, 255.0);
    }
    return out;
}

std::vector<double> gaussian_kernel(int ksize, double sigma)
{
    if (ksize < 1 || ksize % 2 == 0) {
        throw ValidationError("blur kernel size must be odd and >= 1");
    }
    if (!(sigma > 0.0)) {
        throw ValidationError("blur sigma must be positive");
    }
    std::vector<double> k(static_cast<std::size_t>(ksize));
    const int r = ksize / 2;
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        const double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[static_cast<std::size_t>(i + r)] = v;
        sum += v;
    }
    for (auto& v : k) {
        v /= sum;
    }
    return k;
}

RealImage gaussian_blur(const RealImage& image, int ksize, double sigma)
{
    const auto k = gaussian_kernel(ksize, sigma);
    if (ksize == 1 || image.empty()) {
        return image;
    }
    const int r = ksize / 2;
    const int h = image.height;
    const int w = image.width;
    const int ch = image.channels;

    RealImage tmp(h, w, ch);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    acc += k[static_cast<std::size_t>(i + r)] * image.at(y, reflect101(x + i, w), c);
                }
                tmp.at(y, x, c) = acc;
            }
        }
    }
    RealImage out(h, w, ch);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                double acc = 0.0;
                for (int i = -r; i <= r; ++i) {
                    acc += k[static_cast<std::size_t>(i + r)] * tmp.at(reflect101(y + i, h), x, c);
                }
                out.at(y, x, c) = acc;
            }
        }
    }
    return out;
}

SynthPair synthesize(const FractalImage& frac, const GrayImage& target, const SynthParams& params,
                     std::string target_id, std::uint64_t seed)
{
    if (frac.pixels.height != target.height || frac.pixels.width != target.width || target.channels != 1) {
        throw ValidationError("synthesize: target must be a single-channel image of the canvas size");
    }
    const RealImage fused = amplitude_swap_unclamped(to_real(frac.pixels), to_real(target), params.beta);
    const RealImage blurred = gaussian_blur(fused, params.ksize, params.sigma);
    return SynthPair{to_gray8(blurred), frac.mask, std::move(target_id), seed};
}

} // namespace curvisynth
