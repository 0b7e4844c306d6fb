#pragma once

#include "curvisynth/image.hpp"
#include "curvisynth/lsystem.hpp"
#include "curvisynth/random.hpp"

#include <cstdint>
#include <optional>

namespace curvisynth {

struct AugmentConfig {
    double hflip_prob = 0.5;
    /// Chance of rotating; the angle is then uniform over 90, 180, 270.
    double rotate_prob = 0.5;
    double brightness_prob = 0.5;
    double contrast_prob = 0.5;
    Range brightness_contrast_range{1.0, 2.1};
    double saturation_prob = 0.5;
    Range saturation_range{0.5, 1.5};
    double noise_prob = 0.5;
    /// The noise standard deviation is drawn uniformly from this range.
    Range noise_amplitude_range{0.0, 5.0};
    /// 0 keeps the full extent along that axis.
    int crop_height = 256;
    int crop_width = 256;
    /// With a mask, the crop origin is redrawn (up to crop_attempts draws in
    /// total) until the crop holds at least this fraction of foreground;
    /// the best draw wins if none does. 0 disables.
    double min_foreground = 0.01;
    int crop_attempts = 32;
};

void validate(const AugmentConfig& cfg);

/// Concrete decisions for one sample, drawn before any pixel is touched.
struct AugmentPlan {
    bool hflip = false;
    int quarter_turns = 0;  // clockwise
    int crop_y = 0;
    int crop_x = 0;
    int crop_height = 0;
    int crop_width = 0;
    std::optional<double> brightness;
    std::optional<double> contrast;
    std::optional<double> saturation;
    std::optional<double> noise_std;
    std::uint64_t noise_seed = 0;
};

/// Draws decisions in a fixed order: flip, rotation, crop origin,
/// brightness, contrast, saturation, noise. The mask, when given, only
/// steers the crop origin.
AugmentPlan draw_plan(const AugmentConfig& cfg, int height, int width, Rng& rng, const Mask* mask = nullptr);

GrayImage hflip(const GrayImage& img);
/// Rotates clockwise by quarter_turns * 90 degrees.
GrayImage rotate_quarters(const GrayImage& img, int quarter_turns);

/// Geometric ops (flip, rotate, crop) hit image and mask alike; photometric
/// ops touch the image only and are quantized once at the end.
GrayImage apply_plan(const AugmentPlan& plan, const GrayImage& image, Mask* mask = nullptr);

struct Augmented {
    GrayImage image;
    std::optional<Mask> mask;
};

Augmented augment(const GrayImage& image, const std::optional<Mask>& mask, const AugmentConfig& cfg, Rng& rng);

} // namespace curvisynth
