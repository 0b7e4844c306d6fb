#pragma once

#include "curvisynth/image.hpp"

#include <complex>
#include <vector>

namespace curvisynth {

using Complex = std::complex<double>;

/// Unnormalized 2-D DFT coefficients, row-major, DC at (0, 0).
struct ComplexImage {
    int height = 0;
    int width = 0;
    std::vector<Complex> data;

    ComplexImage() = default;
    ComplexImage(int h, int w)
        : height(h), width(w), data(static_cast<std::size_t>(h) * static_cast<std::size_t>(w))
    {
    }
    Complex& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
    const Complex& at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Polar form of a spectrum.
struct Spectrum {
    RealImage amplitude;
    RealImage phase;  // radians

    [[nodiscard]] ComplexImage to_complex() const;
    static Spectrum from_complex(const ComplexImage& coeffs);
};

/// Forward transform, X(u,v) = sum x(y,x) exp(-2 pi i (uy/H + vx/W)).
ComplexImage dft2(const RealImage& image);
/// Inverse transform including the 1/(HW) normalization.
ComplexImage idft2(const ComplexImage& coeffs);

Spectrum fft2(const RealImage& image);
/// Real part of the inverse transform.
RealImage ifft2(const Spectrum& spectrum);
RealImage ifft2_real(const ComplexImage& coeffs);

/// Maps a DC-centered (fftshift) coordinate back to the natural DFT index.
constexpr int unshift_index(int centered, int n) { return ((centered - n / 2) % n + n) % n; }

} // namespace curvisynth
