#include "curvisynth/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace curvisynth {

namespace {

// FFTW's planner is not thread-safe, but executing an existing plan on new
// arrays is. Plans are created once per (H, W, direction) under a lock and
// reused; FFTW_ESTIMATE keeps the chosen algorithm, and thus every output
// bit, independent of timing.
class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int h, int w, int sign)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(h, w, sign);
        if (auto it = plans_.find(key); it != plans_.end()) {
            return it->second;
        }
        const std::size_t n = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
        auto* in = fftw_alloc_complex(n);
        auto* out = fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_2d(h, w, in, out, sign, FFTW_ESTIMATE);
        fftw_free(in);
        fftw_free(out);
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

struct FftwFree {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

FftwBuffer alloc(std::size_t n)
{
    return FftwBuffer(fftw_alloc_complex(n));
}

ComplexImage transform(const ComplexImage& input, int sign)
{
    ComplexImage out(input.height, input.width);
    if (input.data.empty()) {
        return out;
    }
    const std::size_t n = input.data.size();
    auto in_buf = alloc(n);
    auto out_buf = alloc(n);
    static_assert(sizeof(Complex) == sizeof(fftw_complex));
    std::memcpy(in_buf.get(), input.data.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(PlanCache::instance().get(input.height, input.width, sign), in_buf.get(), out_buf.get());
    std::memcpy(static_cast<void*>(out.data.data()), out_buf.get(), n * sizeof(fftw_complex));
    return out;
}

} // namespace

ComplexImage Spectrum::to_complex() const
{
    ComplexImage out(amplitude.height, amplitude.width);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = std::polar(amplitude.data[i], phase.data[i]);
    }
    return out;
}

Spectrum Spectrum::from_complex(const ComplexImage& coeffs)
{
    Spectrum s{RealImage(coeffs.height, coeffs.width), RealImage(coeffs.height, coeffs.width)};
    for (std::size_t i = 0; i < coeffs.data.size(); ++i) {
        s.amplitude.data[i] = std::abs(coeffs.data[i]);
        s.phase.data[i] = std::arg(coeffs.data[i]);
    }
    return s;
}

ComplexImage dft2(const RealImage& image)
{
    if (image.channels != 1) {
        throw ValidationError("dft2 expects a single-channel image");
    }
    ComplexImage in(image.height, image.width);
    for (std::size_t i = 0; i < in.data.size(); ++i) {
        in.data[i] = Complex(image.data[i], 0.0);
    }
    return transform(in, FFTW_FORWARD);
}

ComplexImage idft2(const ComplexImage& coeffs)
{
    ComplexImage out = transform(coeffs, FFTW_BACKWARD);
    const double scale = out.data.empty() ? 1.0 : 1.0 / static_cast<double>(out.data.size());
    for (auto& v : out.data) {
        v *= scale;
    }
    return out;
}

Spectrum fft2(const RealImage& image)
{
    return Spectrum::from_complex(dft2(image));
}

RealImage ifft2_real(const ComplexImage& coeffs)
{
    const ComplexImage spatial = idft2(coeffs);
    RealImage out(coeffs.height, coeffs.width);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = spatial.data[i].real();
    }
    return out;
}

RealImage ifft2(const Spectrum& spectrum)
{
    return ifft2_real(spectrum.to_complex());
}

} // namespace curvisynth
