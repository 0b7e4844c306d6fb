#include "curvisynth/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>

namespace curvisynth {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(key + ": expected a number, got '" + text + "'");
    }
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ValidationError(key + ": expected an unsigned integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no" || t == "off") {
        return false;
    }
    throw ValidationError(key + ": expected true/false, got '" + text + "'");
}

Range parse_range(const std::string& key, const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw ValidationError(key + ": expected 'min, max', got '" + text + "'");
    }
    return Range{parse_double(key, text.substr(0, comma)), parse_double(key, text.substr(comma + 1))};
}

std::string fmt_range(const Range& r)
{
    return fmt_double(r.min) + ", " + fmt_double(r.max);
}

std::vector<Rule> parse_rules(const std::string& text)
{
    std::vector<Rule> rules;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (!item.empty()) {
            rules.push_back(parse_rule(item));
        }
    }
    if (rules.empty()) {
        throw ValidationError("lsystem.rules: at least one rule is required");
    }
    return rules;
}

using Setter = std::function<void(PipelineConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table{
        {"pipeline.preset", [](auto& c, auto&, auto& v) { c.preset = parse_preset(trim(v)); }},
        {"pipeline.count", [](auto& c, auto& k, auto& v) { c.count = static_cast<int>(parse_int(k, v)); }},
        {"pipeline.target_dir", [](auto& c, auto&, auto& v) { c.target_dir = trim(v); }},
        {"pipeline.output_dir", [](auto& c, auto&, auto& v) { c.output_dir = trim(v); }},
        {"pipeline.seed", [](auto& c, auto& k, auto& v) { c.seed = parse_u64(k, v); }},
        {"pipeline.canvas_height", [](auto& c, auto& k, auto& v) { c.canvas_height = static_cast<int>(parse_int(k, v)); }},
        {"pipeline.canvas_width", [](auto& c, auto& k, auto& v) { c.canvas_width = static_cast<int>(parse_int(k, v)); }},
        {"pipeline.target_fit",
         [](auto& c, auto& k, auto& v) {
             const auto t = trim(v);
             if (t == "crop") {
                 c.fit = TargetFit::Crop;
             } else if (t == "resize") {
                 c.fit = TargetFit::Resize;
             } else {
                 throw ValidationError(k + ": expected crop or resize");
             }
         }},
        {"pipeline.gray_mode",
         [](auto& c, auto& k, auto& v) {
             const auto t = trim(v);
             if (t == "luma") {
                 c.gray = GrayMode::Luma;
             } else if (t == "green") {
                 c.gray = GrayMode::Green;
             } else {
                 throw ValidationError(k + ": expected luma or green");
             }
         }},
        {"pipeline.augment", [](auto& c, auto& k, auto& v) { c.augment = parse_bool(k, v); }},
        {"pipeline.emit_liot", [](auto& c, auto& k, auto& v) { c.emit_liot = parse_bool(k, v); }},
        {"pipeline.liot_pngs", [](auto& c, auto& k, auto& v) { c.liot_pngs = parse_bool(k, v); }},
        {"pipeline.debug", [](auto& c, auto& k, auto& v) { c.debug = parse_bool(k, v); }},
        {"pipeline.jobs", [](auto& c, auto& k, auto& v) { c.jobs = static_cast<int>(parse_int(k, v)); }},
        {"fda.beta", [](auto& c, auto& k, auto& v) { c.synth.beta = parse_double(k, v); }},
        {"blur.ksize", [](auto& c, auto& k, auto& v) { c.synth.ksize = static_cast<int>(parse_int(k, v)); }},
        {"blur.sigma", [](auto& c, auto& k, auto& v) { c.synth.sigma = parse_double(k, v); }},
        {"lsystem.axiom", [](auto& c, auto&, auto& v) { c.lsystem.axiom = trim(v); }},
        {"lsystem.rules", [](auto& c, auto&, auto& v) { c.lsystem.ruleset = parse_rules(v); }},
        {"lsystem.iterations", [](auto& c, auto& k, auto& v) { c.lsystem.iterations = static_cast<int>(parse_int(k, v)); }},
        {"lsystem.w_init", [](auto& c, auto& k, auto& v) { c.lsystem.w_init = parse_range(k, v); }},
        {"lsystem.l_init", [](auto& c, auto& k, auto& v) { c.lsystem.l_init = parse_range(k, v); }},
        {"lsystem.gamma", [](auto& c, auto& k, auto& v) { c.lsystem.gamma = parse_range(k, v); }},
        {"lsystem.angle_init", [](auto& c, auto& k, auto& v) { c.lsystem.angle_init = parse_range(k, v); }},
        {"lsystem.angle_delta", [](auto& c, auto& k, auto& v) { c.lsystem.angle_delta = parse_range(k, v); }},
        {"lsystem.intensity", [](auto& c, auto& k, auto& v) { c.lsystem.intensity = parse_range(k, v); }},
        {"lsystem.per_symbol_rule", [](auto& c, auto& k, auto& v) { c.lsystem.per_symbol_rule = parse_bool(k, v); }},
        {"lsystem.trees_per_image",
         [](auto& c, auto& k, auto& v) { c.lsystem.trees_per_image = static_cast<int>(parse_int(k, v)); }},
        {"augment.hflip_prob", [](auto& c, auto& k, auto& v) { c.augment_cfg.hflip_prob = parse_double(k, v); }},
        {"augment.rotate_prob", [](auto& c, auto& k, auto& v) { c.augment_cfg.rotate_prob = parse_double(k, v); }},
        {"augment.brightness_prob", [](auto& c, auto& k, auto& v) { c.augment_cfg.brightness_prob = parse_double(k, v); }},
        {"augment.contrast_prob", [](auto& c, auto& k, auto& v) { c.augment_cfg.contrast_prob = parse_double(k, v); }},
        {"augment.brightness_contrast_range",
         [](auto& c, auto& k, auto& v) { c.augment_cfg.brightness_contrast_range = parse_range(k, v); }},
        {"augment.saturation_prob", [](auto& c, auto& k, auto& v) { c.augment_cfg.saturation_prob = parse_double(k, v); }},
        {"augment.saturation_range", [](auto& c, auto& k, auto& v) { c.augment_cfg.saturation_range = parse_range(k, v); }},
        {"augment.noise_prob", [](auto& c, auto& k, auto& v) { c.augment_cfg.noise_prob = parse_double(k, v); }},
        {"augment.noise_amplitude_range",
         [](auto& c, auto& k, auto& v) { c.augment_cfg.noise_amplitude_range = parse_range(k, v); }},
        {"augment.crop_height", [](auto& c, auto& k, auto& v) { c.augment_cfg.crop_height = static_cast<int>(parse_int(k, v)); }},
        {"augment.crop_width", [](auto& c, auto& k, auto& v) { c.augment_cfg.crop_width = static_cast<int>(parse_int(k, v)); }},
        {"augment.min_foreground", [](auto& c, auto& k, auto& v) { c.augment_cfg.min_foreground = parse_double(k, v); }},
        {"augment.crop_attempts", [](auto& c, auto& k, auto& v) { c.augment_cfg.crop_attempts = static_cast<int>(parse_int(k, v)); }},
    };
    return table;
}

} // namespace

Preset parse_preset(const std::string& name)
{
    if (name == "xcad") {
        return Preset::Xcad;
    }
    if (name == "retina") {
        return Preset::Retina;
    }
    if (name == "crack") {
        return Preset::Crack;
    }
    if (name == "custom") {
        return Preset::Custom;
    }
    throw ValidationError("unknown preset '" + name + "' (expected xcad, retina, crack or custom)");
}

std::string to_string(Preset p)
{
    switch (p) {
    case Preset::Xcad: return "xcad";
    case Preset::Retina: return "retina";
    case Preset::Crack: return "crack";
    case Preset::Custom: return "custom";
    }
    return "custom";
}

std::vector<Rule> default_ruleset()
{
    return {Rule{"F[+F-F]"}, Rule{"F[-F-F]"}, Rule{"F-F-F"}, Rule{"F+F+F"}};
}

PipelineConfig preset_config(Preset p)
{
    PipelineConfig cfg;
    cfg.preset = p;
    cfg.lsystem.ruleset = default_ruleset();
    switch (p) {
    case Preset::Xcad:
    case Preset::Custom:
        cfg.count = 150;
        break;
    case Preset::Crack:
        cfg.count = 150;
        cfg.lsystem.w_init = {2.0, 6.0};
        break;
    case Preset::Retina:
        cfg.count = 600;
        cfg.gray = GrayMode::Green;
        break;
    }
    return cfg;
}

void validate(const PipelineConfig& cfg)
{
    if (cfg.count < 0) {
        throw ValidationError("count must be non-negative");
    }
    if (cfg.canvas_height < 16 || cfg.canvas_width < 16) {
        throw ValidationError("canvas must be at least 16x16");
    }
    if (!(cfg.synth.beta >= 0.0 && cfg.synth.beta < 1.0)) {
        throw ValidationError("beta must lie in (0, 1)");
    }
    gaussian_kernel(cfg.synth.ksize, cfg.synth.sigma);
    const auto& ls = cfg.lsystem;
    for (const auto* r : {&ls.w_init, &ls.l_init, &ls.gamma, &ls.angle_init, &ls.angle_delta, &ls.intensity}) {
        if (!(r->min <= r->max)) {
            throw ValidationError("lsystem ranges must satisfy min <= max");
        }
    }
    if (!(ls.gamma.min > 0.0 && ls.gamma.max <= 1.0)) {
        throw ValidationError("lsystem.gamma must lie in (0, 1]");
    }
    if (!(ls.w_init.min > 0.0 && ls.l_init.min > 0.0)) {
        throw ValidationError("lsystem.w_init and lsystem.l_init must be positive");
    }
    if (ls.trees_per_image < 1) {
        throw ValidationError("lsystem.trees_per_image must be >= 1");
    }
    LSystemSpec probe;
    probe.axiom = ls.axiom;
    probe.ruleset = ls.ruleset;
    probe.iterations = ls.iterations;
    probe.angle_init_range = ls.angle_init;
    probe.angle_delta_range = ls.angle_delta;
    probe.intensity_range = ls.intensity;
    curvisynth::validate(probe);
    if (cfg.augment) {
        curvisynth::validate(cfg.augment_cfg);
        if (cfg.augment_cfg.crop_height > std::min(cfg.canvas_height, cfg.canvas_width) ||
            cfg.augment_cfg.crop_width > std::min(cfg.canvas_height, cfg.canvas_width)) {
            throw ValidationError("augment crop must fit inside the canvas under every rotation");
        }
    }
    if (cfg.jobs < 0) {
        throw ValidationError("jobs must be non-negative");
    }
}

ConfigKeys read_config_keys(const std::filesystem::path& path)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError("config: " + std::string(e.what()));
    }
    ConfigKeys keys;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            throw ValidationError("config: key '" + section + "' must appear inside a [section]");
        }
        for (const auto& [key, value] : body) {
            keys[section + "." + key] = value.get_value<std::string>();
        }
    }
    return keys;
}

void apply_config_keys(PipelineConfig& cfg, const ConfigKeys& keys)
{
    const auto& table = setters();
    for (const auto& [key, value] : keys) {
        auto it = table.find(key);
        if (it == table.end()) {
            throw ValidationError("config: unknown key '" + key + "'");
        }
        it->second(cfg, key, value);
    }
}

std::string render_config(const PipelineConfig& cfg)
{
    std::ostringstream out;
    const auto& ls = cfg.lsystem;
    const auto& a = cfg.augment_cfg;
    std::string rules;
    for (std::size_t i = 0; i < ls.ruleset.size(); ++i) {
        rules += (i ? "; F->" : "F->") + ls.ruleset[i].rhs;
    }
    out << "[pipeline]\n"
        << "preset = " << to_string(cfg.preset) << "\n"
        << "count = " << cfg.count << "\n"
        << "target_dir = " << cfg.target_dir.string() << "\n"
        << "seed = " << cfg.seed << "\n"
        << "canvas_height = " << cfg.canvas_height << "\n"
        << "canvas_width = " << cfg.canvas_width << "\n"
        << "target_fit = " << (cfg.fit == TargetFit::Crop ? "crop" : "resize") << "\n"
        << "gray_mode = " << (cfg.gray == GrayMode::Luma ? "luma" : "green") << "\n"
        << "augment = " << (cfg.augment ? "true" : "false") << "\n"
        << "emit_liot = " << (cfg.emit_liot ? "true" : "false") << "\n"
        << "liot_pngs = " << (cfg.liot_pngs ? "true" : "false") << "\n"
        << "\n[fda]\n"
        << "beta = " << fmt_double(cfg.synth.beta) << "\n"
        << "\n[blur]\n"
        << "ksize = " << cfg.synth.ksize << "\n"
        << "sigma = " << fmt_double(cfg.synth.sigma) << "\n"
        << "\n[lsystem]\n"
        << "axiom = " << ls.axiom << "\n"
        << "rules = " << rules << "\n"
        << "iterations = " << ls.iterations << "\n"
        << "w_init = " << fmt_range(ls.w_init) << "\n"
        << "l_init = " << fmt_range(ls.l_init) << "\n"
        << "gamma = " << fmt_range(ls.gamma) << "\n"
        << "angle_init = " << fmt_range(ls.angle_init) << "\n"
        << "angle_delta = " << fmt_range(ls.angle_delta) << "\n"
        << "intensity = " << fmt_range(ls.intensity) << "\n"
        << "per_symbol_rule = " << (ls.per_symbol_rule ? "true" : "false") << "\n"
        << "trees_per_image = " << ls.trees_per_image << "\n"
        << "\n[augment]\n"
        << "hflip_prob = " << fmt_double(a.hflip_prob) << "\n"
        << "rotate_prob = " << fmt_double(a.rotate_prob) << "\n"
        << "brightness_prob = " << fmt_double(a.brightness_prob) << "\n"
        << "contrast_prob = " << fmt_double(a.contrast_prob) << "\n"
        << "brightness_contrast_range = " << fmt_range(a.brightness_contrast_range) << "\n"
        << "saturation_prob = " << fmt_double(a.saturation_prob) << "\n"
        << "saturation_range = " << fmt_range(a.saturation_range) << "\n"
        << "noise_prob = " << fmt_double(a.noise_prob) << "\n"
        << "noise_amplitude_range = " << fmt_range(a.noise_amplitude_range) << "\n"
        << "crop_height = " << a.crop_height << "\n"
        << "crop_width = " << a.crop_width << "\n"
        << "min_foreground = " << fmt_double(a.min_foreground) << "\n"
        << "crop_attempts = " << a.crop_attempts << "\n";
    return out.str();
}

} // namespace curvisynth
