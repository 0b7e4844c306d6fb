#pragma once

#include "curvisynth/augment.hpp"
#include "curvisynth/fda.hpp"
#include "curvisynth/image.hpp"
#include "curvisynth/lsystem.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curvisynth {

enum class Preset { Xcad, Retina, Crack, Custom };

Preset parse_preset(const std::string& name);
std::string to_string(Preset p);

/// How target images are brought to canvas size.
enum class TargetFit { Crop, Resize };

/// Per-image parameter ranges; each sample draws a concrete LSystemSpec.
struct LSystemRanges {
    std::string axiom = "F";
    std::vector<Rule> ruleset;
    int iterations = 4;
    Range w_init{8.0, 14.0};
    Range l_init{120.0, 200.0};
    Range gamma{0.7, 1.0};
    Range angle_init{20.0, 120.0};
    Range angle_delta{10.0, 40.0};
    Range intensity{1.0, 254.0};
    bool per_symbol_rule = false;
    int trees_per_image = 1;
};

/// The four production rules used by every preset.
std::vector<Rule> default_ruleset();

struct PipelineConfig {
    Preset preset = Preset::Xcad;
    int count = 150;
    std::filesystem::path target_dir;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    int canvas_height = 512;
    int canvas_width = 512;
    TargetFit fit = TargetFit::Crop;
    GrayMode gray = GrayMode::Luma;
    SynthParams synth;
    LSystemRanges lsystem;
    bool augment = true;
    AugmentConfig augment_cfg;
    bool emit_liot = true;
    bool liot_pngs = false;
    bool debug = false;
    /// 0 picks the hardware concurrency.
    int jobs = 0;
};

/// Defaults for a named preset.
PipelineConfig preset_config(Preset p);

void validate(const PipelineConfig& cfg);

/// Flat "section.key" -> value view of an INI file.
using ConfigKeys = std::map<std::string, std::string>;

/// Parses the INI-style config format:
///
///   ; comment
///   [pipeline]
///   preset = xcad
///   count = 150
///   [lsystem]
///   rules = F->F[+F-F]; F->F[-F-F]
///   w_init = 8, 14
///
/// Ranges are "min, max"; rules are separated by ';'.
ConfigKeys read_config_keys(const std::filesystem::path& path);

/// Applies keys onto cfg. Unknown keys raise ValidationError.
void apply_config_keys(PipelineConfig& cfg, const ConfigKeys& keys);

/// Renders cfg in the same format read_config_keys accepts.
std::string render_config(const PipelineConfig& cfg);

} // namespace curvisynth
