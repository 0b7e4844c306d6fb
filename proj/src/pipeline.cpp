#include "curvisynth/pipeline.hpp"

#include "curvisynth/augment.hpp"
#include "curvisynth/fda.hpp"
#include "curvisynth/io.hpp"
#include "curvisynth/liot.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <thread>

namespace curvisynth {

namespace fs = std::filesystem;

SampleError::SampleError(int idx, std::uint64_t s, const std::string& what)
    : std::runtime_error("sample " + std::to_string(idx) + " (seed " + std::to_string(s) + "): " + what),
      index(idx), seed(s)
{
}

namespace {

std::string sample_name(const char* prefix, int index, const char* ext)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06d%s", prefix, index, ext);
    return buf;
}

int worker_count(int jobs, int count)
{
    int n = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(n, 1, std::max(count, 1));
}

// Runs fn(i) for i in [0, count) on a worker pool. On failure the error of
// the lowest failing index is rethrown, so the report does not depend on
// scheduling.
template <typename Fn>
void for_each_sample(int count, int jobs, std::uint64_t seed, Fn fn)
{
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::optional<SampleError> first_error;

    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count || failed.load()) {
                return;
            }
            try {
                fn(i);
            } catch (const std::exception& e) {
                std::lock_guard lock(err_mutex);
                if (!first_error || i < first_error->index) {
                    first_error.emplace(i, sample_seed(seed, static_cast<std::uint64_t>(i)), e.what());
                }
                failed = true;
            }
        }
    };

    const int n = worker_count(jobs, count);
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (first_error) {
        throw *first_error;
    }
}

void make_dir(const fs::path& p)
{
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) {
        throw IoError("cannot create output directory '" + p.string() + "'" + (ec ? ": " + ec.message() : ""));
    }
}

double mask_fraction(const Mask& m)
{
    if (m.data.empty()) {
        return 0.0;
    }
    std::size_t on = 0;
    for (auto v : m.data) {
        on += v != 0;
    }
    return static_cast<double>(on) / static_cast<double>(m.data.size());
}

GrayImage load_target(const fs::path& path, GrayMode mode)
{
    return to_single_channel(read_png(path), mode);
}

void write_text(const fs::path& path, const std::string& text)
{
    write_file_atomic(path, std::vector<unsigned char>(text.begin(), text.end()));
}

void write_outputs(const fs::path& out, const Manifest& manifest, const PipelineConfig& cfg)
{
    write_text(out / "manifest.jsonl", to_jsonl(manifest));
    write_text(out / "config.ini", render_config(cfg));
}

} // namespace

std::string to_jsonl(const Manifest& manifest)
{
    std::string out;
    for (const auto& r : manifest.records) {
        nlohmann::ordered_json j;
        j["index"] = r.index;
        j["image"] = r.image;
        j["mask"] = r.mask;
        j["liot"] = r.liot;
        j["target_image"] = r.target_image;
        j["target_liot"] = r.target_liot;
        j["source_target"] = r.source_target;
        j["seed"] = r.seed;
        nlohmann::ordered_json p;
        p["trees"] = r.params.trees;
        p["iterations"] = r.params.iterations;
        p["w_init"] = r.params.w_init;
        p["l_init"] = r.params.l_init;
        p["gamma"] = r.params.gamma;
        p["segments"] = r.params.segments;
        p["mask_fraction"] = r.params.mask_fraction;
        j["params"] = std::move(p);
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<fs::path> list_target_images(const fs::path& dir)
{
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError("target directory '" + dir.string() + "' does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

LSystemSpec draw_lsystem(const LSystemRanges& ranges, std::uint64_t seed, Rng& rng)
{
    LSystemSpec spec;
    spec.axiom = ranges.axiom;
    spec.ruleset = ranges.ruleset;
    spec.iterations = ranges.iterations;
    spec.w_init = rng.uniform(ranges.w_init.min, ranges.w_init.max);
    spec.l_init = rng.uniform(ranges.l_init.min, ranges.l_init.max);
    spec.gamma = rng.uniform(ranges.gamma.min, ranges.gamma.max);
    spec.angle_init_range = ranges.angle_init;
    spec.angle_delta_range = ranges.angle_delta;
    spec.intensity_range = ranges.intensity;
    spec.seed = seed;
    spec.per_symbol_rule = ranges.per_symbol_rule;
    return spec;
}

FractalImage generate_fractal(const LSystemRanges& ranges, int height, int width, Rng& rng, SampleSummary* summary)
{
    TurtleProgram program;
    LSystemSpec spec;
    for (int t = 0; t < ranges.trees_per_image; ++t) {
        spec = draw_lsystem(ranges, 0, rng);
        const SymbolString symbols = expand(spec, rng);
        auto tree = build_program(symbols, spec, height, width, rng);
        program.segments.insert(program.segments.end(), tree.segments.begin(), tree.segments.end());
    }
    FractalImage frac = rasterize(program, height, width);
    if (summary) {
        summary->trees = ranges.trees_per_image;
        summary->iterations = spec.iterations;
        summary->w_init = spec.w_init;
        summary->l_init = spec.l_init;
        summary->gamma = spec.gamma;
        summary->segments = program.segments.size();
        summary->mask_fraction = mask_fraction(frac.mask);
    }
    return frac;
}

GrayImage fit_target(const GrayImage& target, int height, int width, TargetFit fit, Rng& rng)
{
    if (target.empty()) {
        throw ValidationError("target image is empty");
    }
    if (fit == TargetFit::Resize) {
        if (target.height == height && target.width == width) {
            return target;
        }
        return resize_bilinear(target, height, width);
    }
    GrayImage src = target;
    if (src.height < height || src.width < width) {
        const double scale = std::max(static_cast<double>(height) / src.height, static_cast<double>(width) / src.width);
        src = resize_bilinear(src, std::max(height, static_cast<int>(std::ceil(src.height * scale))),
                              std::max(width, static_cast<int>(std::ceil(src.width * scale))));
    }
    const int y = static_cast<int>(rng.below(static_cast<std::uint64_t>(src.height - height + 1)));
    const int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(src.width - width + 1)));
    return crop(src, y, x, height, width);
}

Manifest run(const PipelineConfig& cfg)
{
    validate(cfg);
    const fs::path out = cfg.output_dir;
    std::vector<fs::path> targets;
    if (cfg.count > 0) {
        targets = list_target_images(cfg.target_dir);
        if (targets.empty()) {
            throw IoError("target directory '" + cfg.target_dir.string() + "' contains no PNG images");
        }
    }
    make_dir(out);
    make_dir(out / "images");
    make_dir(out / "masks");
    if (cfg.emit_liot) {
        make_dir(out / "liot");
        make_dir(out / "targets");
    }
    if (cfg.debug) {
        make_dir(out / "debug");
    }

    Manifest manifest;
    manifest.records.resize(static_cast<std::size_t>(cfg.count));

    for_each_sample(cfg.count, cfg.jobs, cfg.seed, [&](int i) {
        const std::uint64_t seed = sample_seed(cfg.seed, static_cast<std::uint64_t>(i));
        Rng rng(seed);
        ManifestRecord rec;
        rec.index = i;
        rec.seed = seed;

        const FractalImage frac = generate_fractal(cfg.lsystem, cfg.canvas_height, cfg.canvas_width, rng, &rec.params);

        const auto& target_path = targets[rng.below(targets.size())];
        const GrayImage target =
            fit_target(load_target(target_path, cfg.gray), cfg.canvas_height, cfg.canvas_width, cfg.fit, rng);
        rec.source_target = target_path.filename().string();

        SynthPair pair = synthesize(frac, target, cfg.synth, rec.source_target, seed);
        if (cfg.debug) {
            const RealImage fused = amplitude_swap(to_real(frac.pixels), to_real(target), cfg.synth.beta);
            write_png(out / "debug" / sample_name("fused", i, ".png"), to_gray8(fused));
            write_png(out / "debug" / sample_name("fractal", i, ".png"), frac.pixels);
        }

        GrayImage image = std::move(pair.image);
        Mask mask = std::move(pair.mask);
        if (cfg.augment) {
            auto aug = augment(image, mask, cfg.augment_cfg, rng);
            image = std::move(aug.image);
            mask = std::move(*aug.mask);
        }
        rec.params.mask_fraction = mask_fraction(mask);

        rec.image = "images/" + sample_name("sample", i, ".png");
        rec.mask = "masks/" + sample_name("sample", i, ".png");
        write_png(out / rec.image, image);
        write_mask_png(out / rec.mask, mask);

        if (cfg.emit_liot) {
            const LiotImage liot = liot_transform(image);
            rec.liot = "liot/" + sample_name("sample", i, ".lio");
            write_liot(out / rec.liot, liot);

            const auto& other_path = targets[rng.below(targets.size())];
            GrayImage other =
                fit_target(load_target(other_path, cfg.gray), cfg.canvas_height, cfg.canvas_width, cfg.fit, rng);
            if (cfg.augment) {
                other = augment(other, std::nullopt, cfg.augment_cfg, rng).image;
            }
            const LiotImage other_liot = liot_transform(other);
            rec.target_image = "targets/" + sample_name("target", i, ".png");
            rec.target_liot = "liot/" + sample_name("target", i, ".lio");
            write_png(out / rec.target_image, other);
            write_liot(out / rec.target_liot, other_liot);
            if (cfg.liot_pngs) {
                write_liot_pngs(out / "liot" / sample_name("sample", i, ""), liot);
                write_liot_pngs(out / "liot" / sample_name("target", i, ""), other_liot);
            }
        }
        manifest.records[static_cast<std::size_t>(i)] = std::move(rec);
    });

    write_outputs(out, manifest, cfg);
    return manifest;
}

Manifest generate_fractals(const PipelineConfig& cfg)
{
    validate(cfg);
    const fs::path out = cfg.output_dir;
    make_dir(out);
    make_dir(out / "images");
    make_dir(out / "masks");

    Manifest manifest;
    manifest.records.resize(static_cast<std::size_t>(cfg.count));
    for_each_sample(cfg.count, cfg.jobs, cfg.seed, [&](int i) {
        const std::uint64_t seed = sample_seed(cfg.seed, static_cast<std::uint64_t>(i));
        Rng rng(seed);
        ManifestRecord rec;
        rec.index = i;
        rec.seed = seed;
        const FractalImage frac = generate_fractal(cfg.lsystem, cfg.canvas_height, cfg.canvas_width, rng, &rec.params);
        rec.image = "images/" + sample_name("fractal", i, ".png");
        rec.mask = "masks/" + sample_name("fractal", i, ".png");
        write_png(out / rec.image, frac.pixels);
        write_mask_png(out / rec.mask, frac.mask);
        manifest.records[static_cast<std::size_t>(i)] = std::move(rec);
    });
    write_outputs(out, manifest, cfg);
    return manifest;
}

} // namespace curvisynth
