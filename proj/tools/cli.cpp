#include "cli.hpp"

#include "curvisynth/augment.hpp"
#include "curvisynth/config.hpp"
#include "curvisynth/fda.hpp"
#include "curvisynth/io.hpp"
#include "curvisynth/liot.hpp"
#include "curvisynth/losses.hpp"
#include "curvisynth/metrics.hpp"
#include "curvisynth/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace curvisynth::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string preset;
    std::string out;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_kv(std::ostream& out, const std::string& key, const std::optional<double>& v)
{
    out << key << '=' << (v ? fmt(*v) : std::string("NA")) << '\n';
}

std::string ext_of(const fs::path& p)
{
    std::string e = p.extension().string();
    for (auto& c : e) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return e;
}

/// Preset defaults, then config-file keys, then command-line flags.
PipelineConfig resolve_config(const GlobalFlags& g)
{
    ConfigKeys keys;
    if (!g.config.empty()) {
        keys = read_config_keys(g.config);
    }
    std::string preset = g.preset;
    if (preset.empty()) {
        auto it = keys.find("pipeline.preset");
        preset = it != keys.end() ? it->second : "xcad";
    }
    PipelineConfig cfg = preset_config(parse_preset(preset));
    keys.erase("pipeline.preset");
    apply_config_keys(cfg, keys);
    if (g.seed) {
        cfg.seed = *g.seed;
    }
    if (!g.out.empty()) {
        cfg.output_dir = g.out;
    }
    return cfg;
}

/// Loads a single-channel H x W map from LIO1/LF64 (C must be 1) or PNG
/// (scaled by 1/255).
ProbMap load_map(const fs::path& path)
{
    if (ext_of(path) == ".png") {
        const GrayImage img = to_single_channel(read_png(path));
        ProbMap m{img.height, img.width, {}};
        m.values.reserve(img.data.size());
        for (auto v : img.data) {
            m.values.push_back(v / 255.0);
        }
        return m;
    }
    const auto t = read_tensor(path);
    if (t.channels != 1) {
        throw ValidationError("'" + path.string() + "' must hold a single-channel map");
    }
    return ProbMap{t.height, t.width, t.data};
}

FeatureMap load_features(const fs::path& path)
{
    const auto t = read_tensor(path);
    FeatureMap f{t.height, t.width, t.channels, {}};
    f.values.resize(t.data.size());
    for (int c = 0; c < t.channels; ++c) {
        for (int y = 0; y < t.height; ++y) {
            for (int x = 0; x < t.width; ++x) {
                f.values[(static_cast<std::size_t>(y) * t.width + x) * t.channels + c] = t.at(c, y, x);
            }
        }
    }
    return f;
}

Mask load_binary(const fs::path& path)
{
    if (ext_of(path) == ".png") {
        return read_mask_png(path);
    }
    const ProbMap m = load_map(path);
    Mask out(m.height, m.width);
    for (std::size_t i = 0; i < m.values.size(); ++i) {
        out.data[i] = m.values[i] >= 0.5 ? 1 : 0;
    }
    return out;
}

fs::path require_out(const GlobalFlags& g, const char* what)
{
    if (g.out.empty()) {
        throw ValidationError(std::string(what) + " needs --out");
    }
    return g.out;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Synthetic curvilinear-structure data: fractal generation, Fourier fusion, "
                 "intensity-order transform, loss and metric evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--config", g.config, "Config file (INI sections: pipeline, fda, blur, lsystem, augment)");
    app.add_option("--seed", g.seed, "Seed controlling all randomness");
    app.add_option("--preset", g.preset, "xcad | retina | crack | custom");
    app.add_option("--out", g.out, "Output directory or file");

    // gen-fractals / dataset
    std::optional<int> count;
    std::optional<int> jobs;
    std::string target_dir;
    std::string fit;
    bool no_liot = false;
    bool liot_pngs = false;
    bool debug = false;

    auto* gen = app.add_subcommand("gen-fractals", "Render fractal images and masks only");
    gen->add_option("--count", count, "Number of images");
    gen->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

    auto* dataset = app.add_subcommand("dataset", "Run the full synthesis pipeline");
    dataset->add_option("--count", count, "Number of synthetic samples");
    dataset->add_option("--target-dir", target_dir, "Directory of unlabeled target PNG images");
    dataset->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    dataset->add_option("--fit", fit, "How targets reach canvas size: crop | resize")->check(CLI::IsMember({"crop", "resize"}));
    dataset->add_flag("--no-liot", no_liot, "Skip the intensity-order outputs");
    dataset->add_flag("--liot-pngs", liot_pngs, "Also write one PNG per direction channel");
    dataset->add_flag("--debug", debug, "Dump fused images before blur");

    // synthesize
    std::string fractal_path;
    std::string target_path;
    std::string mask_in;
    std::string mask_out;
    std::string fused_out;
    std::optional<double> beta;
    std::optional<int> ksize;
    std::optional<double> sigma;
    auto* synth = app.add_subcommand("synthesize", "Fuse one fractal image with one target image");
    synth->add_option("--fractal", fractal_path, "Fractal image PNG")->required();
    synth->add_option("--target", target_path, "Target image PNG")->required();
    synth->add_option("--mask", mask_in, "Fractal mask PNG, copied unchanged to --mask-out");
    synth->add_option("--mask-out", mask_out, "Where to write the mask");
    synth->add_option("--fused-out", fused_out, "Write the fused image before blurring");
    synth->add_option("--beta", beta, "Low-frequency window ratio");
    synth->add_option("--ksize", ksize, "Blur kernel size (odd)");
    synth->add_option("--sigma", sigma, "Blur sigma");

    // liot
    std::string in_path;
    bool pngs = false;
    auto* liot = app.add_subcommand("liot", "Intensity-order transform of one image (LIO1 tensor)");
    liot->add_option("--in", in_path, "Input PNG")->required();
    liot->add_flag("--pngs", pngs, "Also write <out>_left.png ... <out>_bottom.png");

    // augment
    auto* aug = app.add_subcommand("augment", "Augment one image and optional mask");
    aug->add_option("--in", in_path, "Input PNG")->required();
    aug->add_option("--mask", mask_in, "Mask PNG");
    aug->add_option("--mask-out", mask_out, "Where to write the augmented mask");

    // loss-eval
    std::string d_syn, d_tgt, g_syn, y_syn, y_tgt, z_syn, z_tgt;
    double lambda = 0.4;
    double tau = 0.1;
    double alpha = 0.1;
    double ratio = 0.3;
    std::vector<std::size_t> caps{500, 500, 1000};
    auto* loss = app.add_subcommand("loss-eval", "Evaluate losses on tensor files; prints key=value lines");
    loss->add_option("--d-syn", d_syn, "Discriminator output on synthetic predictions");
    loss->add_option("--d-tgt", d_tgt, "Discriminator output on target predictions");
    loss->add_option("--g-syn", g_syn, "Synthetic ground-truth mask");
    loss->add_option("--y-syn", y_syn, "Predicted probabilities on the synthetic image");
    loss->add_option("--y-tgt", y_tgt, "Predicted probabilities on the target image");
    loss->add_option("--z-syn", z_syn, "Projected features of the synthetic image (H x W x C)");
    loss->add_option("--z-tgt", z_tgt, "Projected features of the target image (H x W x C)");
    loss->add_option("--lambda", lambda, "Contrastive weight")->capture_default_str();
    loss->add_option("--tau", tau, "Temperature")->capture_default_str();
    loss->add_option("--alpha", alpha, "Confidence threshold for target partitions")->capture_default_str();
    loss->add_option("--sigma", ratio, "Key sampling ratio")->capture_default_str();
    loss->add_option("--caps", caps, "Query, positive and negative key caps")->expected(3)->delimiter(',');

    // metrics
    std::string pred, gt, scores;
    auto* met = app.add_subcommand("metrics", "Segmentation metrics; prints key=value lines");
    met->add_option("--pred", pred, "Binary prediction (PNG or tensor)")->required();
    met->add_option("--gt", gt, "Binary ground truth (PNG or tensor)")->required();
    met->add_option("--scores", scores, "Probability map for AUC (PNG or tensor)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen->parsed() || dataset->parsed()) {
            PipelineConfig cfg = resolve_config(g);
            if (count) {
                cfg.count = *count;
            }
            if (jobs) {
                cfg.jobs = *jobs;
            }
            if (!target_dir.empty()) {
                cfg.target_dir = target_dir;
            }
            if (!fit.empty()) {
                cfg.fit = fit == "crop" ? TargetFit::Crop : TargetFit::Resize;
            }
            cfg.emit_liot = cfg.emit_liot && !no_liot;
            cfg.liot_pngs = cfg.liot_pngs || liot_pngs;
            cfg.debug = cfg.debug || debug;
            if (cfg.output_dir.empty()) {
                throw ValidationError("an output directory is required (--out or pipeline.output_dir)");
            }
            const Manifest m = gen->parsed() ? generate_fractals(cfg) : run(cfg);
            out << "wrote " << m.records.size() << " samples to " << cfg.output_dir.string() << '\n';
        } else if (synth->parsed()) {
            PipelineConfig cfg = resolve_config(g);
            SynthParams params = cfg.synth;
            if (beta) {
                params.beta = *beta;
            }
            if (ksize) {
                params.ksize = *ksize;
            }
            if (sigma) {
                params.sigma = *sigma;
            }
            const fs::path dst = require_out(g, "synthesize");
            FractalImage frac;
            frac.pixels = to_single_channel(read_png(fractal_path));
            frac.mask = mask_in.empty() ? Mask(frac.pixels.height, frac.pixels.width) : read_mask_png(mask_in);
            if (frac.mask.height != frac.pixels.height || frac.mask.width != frac.pixels.width) {
                throw ValidationError("mask and fractal image differ in size");
            }
            Rng rng(cfg.seed);
            const GrayImage target = fit_target(to_single_channel(read_png(target_path), cfg.gray),
                                                frac.pixels.height, frac.pixels.width, cfg.fit, rng);
            const SynthPair pair = synthesize(frac, target, params, fs::path(target_path).filename().string(), cfg.seed);
            write_png(dst, pair.image);
            if (!mask_out.empty()) {
                write_mask_png(mask_out, pair.mask);
            }
            if (!fused_out.empty()) {
                write_png(fused_out, to_gray8(amplitude_swap(to_real(frac.pixels), to_real(target), params.beta)));
            }
        } else if (liot->parsed()) {
            const fs::path dst = require_out(g, "liot");
            const LiotImage result = liot_transform(to_single_channel(read_png(in_path)));
            write_liot(dst, result);
            if (pngs) {
                fs::path stem = dst;
                stem.replace_extension();
                write_liot_pngs(stem, result);
            }
        } else if (aug->parsed()) {
            const PipelineConfig cfg = resolve_config(g);
            const fs::path dst = require_out(g, "augment");
            const GrayImage image = read_png(in_path);
            std::optional<Mask> mask;
            if (!mask_in.empty()) {
                mask = read_mask_png(mask_in);
            }
            Rng rng(cfg.seed);
            const Augmented result = augment(image, mask, cfg.augment_cfg, rng);
            write_png(dst, result.image);
            if (result.mask && !mask_out.empty()) {
                write_mask_png(mask_out, *result.mask);
            }
        } else if (loss->parsed()) {
            const PipelineConfig cfg = resolve_config(g);
            std::optional<double> l_seg, l_psal, l_cmcl;
            if (!d_syn.empty() && !d_tgt.empty()) {
                print_kv(out, "discriminator_loss", discriminator_loss(load_map(d_syn), load_map(d_tgt)));
            }
            if (!d_tgt.empty()) {
                l_psal = psal(load_map(d_tgt));
                print_kv(out, "psal", l_psal);
            }
            if (!g_syn.empty() && !y_syn.empty()) {
                l_seg = seg_loss(load_map(g_syn), load_map(y_syn));
                print_kv(out, "seg_loss", l_seg);
            }
            if (!g_syn.empty() && !y_tgt.empty() && !z_syn.empty() && !z_tgt.empty()) {
                const auto parts_syn = partition_pixels(load_map(g_syn), PartitionSource::Synthetic, alpha);
                const auto parts_tgt = partition_pixels(load_map(y_tgt), PartitionSource::Target, alpha);
                Rng rng(cfg.seed);
                try {
                    const KeySets keys = sample_keys(load_features(z_syn), load_features(z_tgt), parts_syn, parts_tgt,
                                                     ratio, KeyCaps{caps[0], caps[1], caps[2]}, rng);
                    out << "cmcl_queries=" << keys.queries.size() << '\n'
                        << "cmcl_positives=" << keys.positive_keys.size() << '\n'
                        << "cmcl_negatives=" << keys.negative_keys.size() << '\n';
                    l_cmcl = cmcl(keys, tau);
                    print_kv(out, "cmcl", l_cmcl);
                } catch (const DegenerateBatch& e) {
                    out << "cmcl=degenerate\n";
                    l_cmcl = 0.0;
                }
            }
            if (l_seg && l_psal && l_cmcl) {
                print_kv(out, "total", total_loss(*l_seg, *l_psal, *l_cmcl, lambda));
            }
        } else if (met->parsed()) {
            const Mask p = load_binary(pred);
            const Mask t = load_binary(gt);
            std::optional<ProbMap> s;
            if (!scores.empty()) {
                s = load_map(scores);
            }
            const Metrics m = s ? evaluate(p, t, std::span<const double>(s->values)) : evaluate(p, t);
            out << "tp=" << m.counts.tp << "\nfp=" << m.counts.fp << "\ntn=" << m.counts.tn << "\nfn=" << m.counts.fn
                << '\n';
            print_kv(out, "jaccard", m.jaccard);
            print_kv(out, "dice", m.dice);
            print_kv(out, "accuracy", m.accuracy);
            print_kv(out, "sensitivity", m.sensitivity);
            print_kv(out, "specificity", m.specificity);
            print_kv(out, "auc", m.auc);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}

} // namespace curvisynth::cli
