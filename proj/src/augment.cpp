#include "curvisynth/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

namespace curvisynth {

namespace {

void check_prob(double p, const char* name)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(name) + " must be a probability in [0, 1]");
    }
}

void check_range(const Range& r, const char* name, double floor)
{
    if (!(r.min <= r.max) || r.min < floor) {
        throw ValidationError(std::string(name) + " must satisfy " + std::to_string(floor) + " <= min <= max");
    }
}

} // namespace

void validate(const AugmentConfig& cfg)
{
    check_prob(cfg.hflip_prob, "hflip_prob");
    check_prob(cfg.rotate_prob, "rotate_prob");
    check_prob(cfg.brightness_prob, "brightness_prob");
    check_prob(cfg.contrast_prob, "contrast_prob");
    check_prob(cfg.saturation_prob, "saturation_prob");
    check_prob(cfg.noise_prob, "noise_prob");
    check_range(cfg.brightness_contrast_range, "brightness_contrast_range", 0.0);
    check_range(cfg.saturation_range, "saturation_range", 0.0);
    check_range(cfg.noise_amplitude_range, "noise_amplitude_range", 0.0);
    if (cfg.crop_height < 0 || cfg.crop_width < 0) {
        throw ValidationError("crop size must be non-negative");
    }
    if (!(cfg.min_foreground >= 0.0 && cfg.min_foreground <= 1.0)) {
        throw ValidationError("min_foreground must lie in [0, 1]");
    }
    if (cfg.crop_attempts < 1) {
        throw ValidationError("crop_attempts must be at least 1");
    }
}

namespace {

// Summed-area table with a zero first row and column.
class AreaSum {
public:
    explicit AreaSum(const Mask& m)
        : w_(m.width + 1), sums_(static_cast<std::size_t>((m.height + 1) * (m.width + 1)), 0)
    {
        for (int y = 0; y < m.height; ++y) {
            for (int x = 0; x < m.width; ++x) {
                at(y + 1, x + 1) = (m.at(y, x) ? 1 : 0) + at(y, x + 1) + at(y + 1, x) - at(y, x);
            }
        }
    }

    [[nodiscard]] std::int64_t rect(int y, int x, int h, int w) const
    {
        return get(y + h, x + w) - get(y, x + w) - get(y + h, x) + get(y, x);
    }

private:
    std::int64_t& at(int y, int x) { return sums_[static_cast<std::size_t>(y * w_ + x)]; }
    [[nodiscard]] std::int64_t get(int y, int x) const { return sums_[static_cast<std::size_t>(y * w_ + x)]; }

    int w_;
    std::vector<std::int64_t> sums_;
};

} // namespace

AugmentPlan draw_plan(const AugmentConfig& cfg, int height, int width, Rng& rng, const Mask* mask)
{
    validate(cfg);
    AugmentPlan plan;
    plan.hflip = rng.bernoulli(cfg.hflip_prob);
    if (rng.bernoulli(cfg.rotate_prob)) {
        plan.quarter_turns = 1 + static_cast<int>(rng.below(3));
    }
    const bool swapped = plan.quarter_turns % 2 == 1;
    const int h = swapped ? width : height;
    const int w = swapped ? height : width;
    plan.crop_height = cfg.crop_height ? cfg.crop_height : h;
    plan.crop_width = cfg.crop_width ? cfg.crop_width : w;
    if (plan.crop_height > h || plan.crop_width > w) {
        throw ValidationError("crop " + std::to_string(plan.crop_height) + "x" + std::to_string(plan.crop_width) +
                              " is larger than the " + std::to_string(h) + "x" + std::to_string(w) + " image");
    }
    auto draw_origin = [&] {
        const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(h - plan.crop_height + 1)));
        const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(w - plan.crop_width + 1)));
        return std::pair{y, x};
    };
    std::tie(plan.crop_y, plan.crop_x) = draw_origin();
    const bool movable = plan.crop_height < h || plan.crop_width < w;
    if (mask && cfg.min_foreground > 0.0 && movable) {
        if (mask->height != height || mask->width != width) {
            throw ValidationError("mask and image dimensions differ");
        }
        const AreaSum sums(rotate_quarters(plan.hflip ? hflip(*mask) : *mask, plan.quarter_turns));
        const auto need = static_cast<std::int64_t>(
            std::ceil(cfg.min_foreground * plan.crop_height * plan.crop_width - 1e-9));
        std::int64_t best = sums.rect(plan.crop_y, plan.crop_x, plan.crop_height, plan.crop_width);
        for (int attempt = 1; attempt < cfg.crop_attempts && best < need; ++attempt) {
            const auto [y, x] = draw_origin();
            const std::int64_t got = sums.rect(y, x, plan.crop_height, plan.crop_width);
            if (got > best) {
                best = got;
                plan.crop_y = y;
                plan.crop_x = x;
            }
        }
    }

    const auto& bc = cfg.brightness_contrast_range;
    if (rng.bernoulli(cfg.brightness_prob)) {
        plan.brightness = rng.uniform(bc.min, bc.max);
    }
    if (rng.bernoulli(cfg.contrast_prob)) {
        plan.contrast = rng.uniform(bc.min, bc.max);
    }
    if (rng.bernoulli(cfg.saturation_prob)) {
        plan.saturation = rng.uniform(cfg.saturation_range.min, cfg.saturation_range.max);
    }
    if (rng.bernoulli(cfg.noise_prob)) {
        plan.noise_std = rng.uniform(cfg.noise_amplitude_range.min, cfg.noise_amplitude_range.max);
        plan.noise_seed = rng.next_u64();
    }
    return plan;
}

GrayImage hflip(const GrayImage& img)
{
    GrayImage out(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                out.at(y, x, c) = img.at(y, img.width - 1 - x, c);
            }
        }
    }
    return out;
}

GrayImage rotate_quarters(const GrayImage& img, int quarter_turns)
{
    const int k = ((quarter_turns % 4) + 4) % 4;
    if (k == 0) {
        return img;
    }
    const int h = img.height;
    const int w = img.width;
    GrayImage out = (k == 2) ? GrayImage(h, w, img.channels) : GrayImage(w, h, img.channels);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            int sy = 0;
            int sx = 0;
            switch (k) {
            case 1: sy = h - 1 - x; sx = y; break;
            case 2: sy = h - 1 - y; sx = w - 1 - x; break;
            default: sy = x; sx = w - 1 - y; break;
            }
            for (int c = 0; c < img.channels; ++c) {
                out.at(y, x, c) = img.at(sy, sx, c);
            }
        }
    }
    return out;
}

namespace {

GrayImage geometric(const AugmentPlan& plan, const GrayImage& img)
{
    GrayImage out = plan.hflip ? hflip(img) : img;
    out = rotate_quarters(out, plan.quarter_turns);
    if (plan.crop_y != 0 || plan.crop_x != 0 || plan.crop_height != out.height || plan.crop_width != out.width) {
        out = crop(out, plan.crop_y, plan.crop_x, plan.crop_height, plan.crop_width);
    }
    return out;
}

double luma(const RealImage& img, int y, int x)
{
    return 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) + 0.114 * img.at(y, x, 2);
}

} // namespace

GrayImage apply_plan(const AugmentPlan& plan, const GrayImage& image, Mask* mask)
{
    if (mask && (mask->height != image.height || mask->width != image.width)) {
        throw ValidationError("mask and image dimensions differ");
    }
    GrayImage geo = geometric(plan, image);
    if (mask) {
        *mask = geometric(plan, *mask);
    }

    const bool color = geo.channels >= 3;
    const bool saturate = plan.saturation && color;
    if (!plan.brightness && !plan.contrast && !saturate && !plan.noise_std) {
        return geo;
    }

    RealImage px = to_real(geo);
    if (plan.brightness) {
        for (auto& v : px.data) {
            v *= *plan.brightness;
        }
    }
    if (plan.contrast) {
        double mean = 0.0;
        for (int y = 0; y < px.height; ++y) {
            for (int x = 0; x < px.width; ++x) {
                mean += color ? luma(px, y, x) : px.at(y, x);
            }
        }
        mean /= static_cast<double>(std::max<std::size_t>(px.pixel_count(), 1));
        for (auto& v : px.data) {
            v = mean + *plan.contrast * (v - mean);
        }
    }
    if (saturate) {
        for (int y = 0; y < px.height; ++y) {
            for (int x = 0; x < px.width; ++x) {
                const double g = luma(px, y, x);
                for (int c = 0; c < 3; ++c) {
                    px.at(y, x, c) = g + *plan.saturation * (px.at(y, x, c) - g);
                }
            }
        }
    }
    if (plan.noise_std) {
        Rng noise(plan.noise_seed);
        for (auto& v : px.data) {
            v += *plan.noise_std * noise.normal();
        }
    }
    return to_gray8(px);
}

Augmented augment(const GrayImage& image, const std::optional<Mask>& mask, const AugmentConfig& cfg, Rng& rng)
{
    const AugmentPlan plan = draw_plan(cfg, image.height, image.width, rng, mask ? &*mask : nullptr);
    Augmented out;
    if (mask) {
        Mask m = *mask;
        out.image = apply_plan(plan, image, &m);
        out.mask = std::move(m);
    } else {
        out.image = apply_plan(plan, image);
    }
    return out;
}

} // namespace curvisynth
