#pragma once

#include "curvisynth/config.hpp"
#include "curvisynth/raster.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvisynth {

/// A failure while generating one sample. Carries what is needed to
/// reproduce it in isolation.
class SampleError : public std::runtime_error {
public:
    SampleError(int index, std::uint64_t seed, const std::string& what);
    int index;
    std::uint64_t seed;
};

/// Parameters actually drawn for one sample.
struct SampleSummary {
    int trees = 1;
    int iterations = 0;
    double w_init = 0.0;
    double l_init = 0.0;
    double gamma = 0.0;
    std::size_t segments = 0;
    double mask_fraction = 0.0;
};

struct ManifestRecord {
    int index = 0;
    std::string image;        // paths relative to the output directory
    std::string mask;
    std::string liot;         // empty unless emit_liot
    std::string target_image; // augmented target crop, empty unless emit_liot
    std::string target_liot;
    std::string source_target;  // file name of the fused target image
    std::uint64_t seed = 0;
    SampleSummary params;
};

struct Manifest {
    std::vector<ManifestRecord> records;
};

/// One line of JSON per record, keys in a fixed order.
std::string to_jsonl(const Manifest& manifest);

/// Sorted list of PNG files directly inside dir.
std::vector<std::filesystem::path> list_target_images(const std::filesystem::path& dir);

/// Draws the concrete L-system for one image from the configured ranges.
LSystemSpec draw_lsystem(const LSystemRanges& ranges, std::uint64_t seed, Rng& rng);

/// Fractal image for one sample (all trees on one canvas).
FractalImage generate_fractal(const LSystemRanges& ranges, int height, int width, Rng& rng,
                              SampleSummary* summary = nullptr);

/// Brings a target image to the canvas size (random crop, or resize).
/// Sources smaller than the canvas are upscaled first in crop mode.
GrayImage fit_target(const GrayImage& target, int height, int width, TargetFit fit, Rng& rng);

/// Runs the full pipeline and writes
///   images/ masks/ [liot/ targets/] [debug/] manifest.jsonl config.ini
/// under cfg.output_dir. Output bytes depend only on (config, seed).
Manifest run(const PipelineConfig& cfg);

/// Fractal images and masks only (no fusion, no augmentation).
Manifest generate_fractals(const PipelineConfig& cfg);

} // namespace curvisynth
