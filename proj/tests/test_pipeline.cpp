#include "doctest.h"
#include "temp_dir.hpp"

#include "curvisynth/io.hpp"
#include "curvisynth/liot.hpp"
#include "curvisynth/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

using namespace curvisynth;
namespace fs = std::filesystem;

namespace {

void make_targets(const fs::path& dir, int n, int h, int w)
{
    fs::create_directories(dir);
    Rng rng(500);
    for (int i = 0; i < n; ++i) {
        GrayImage img(h, w, i % 2 ? 3 : 1);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < img.channels; ++c) {
                    img.at(y, x, c) = static_cast<std::uint8_t>(100 + 40 * std::sin(x * 0.2 + i) + rng.uniform(0, 30));
                }
            }
        }
        write_png(dir / ("t" + std::to_string(i) + ".png"), img);
    }
}

PipelineConfig small_config(const fs::path& targets, const fs::path& out)
{
    PipelineConfig cfg = preset_config(Preset::Xcad);
    cfg.count = 6;
    cfg.seed = 11;
    cfg.canvas_height = 96;
    cfg.canvas_width = 96;
    cfg.lsystem.w_init = {3, 5};
    cfg.lsystem.l_init = {20, 40};
    cfg.augment_cfg.crop_height = 64;
    cfg.augment_cfg.crop_width = 64;
    cfg.target_dir = targets;
    cfg.output_dir = out;
    cfg.jobs = 1;
    return cfg;
}

std::map<std::string, std::string> read_tree(const fs::path& root)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) {
            std::ifstream in(e.path(), std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            files[fs::relative(e.path(), root).string()] = s.str();
        }
    }
    return files;
}

} // namespace

TEST_CASE("zero samples gives an empty manifest")
{
    TempDir dir("curvisynth_pipe0");
    make_targets(dir / "targets", 1, 96, 96);
    auto cfg = small_config(dir / "targets", dir / "out");
    cfg.count = 0;
    const auto m = run(cfg);
    CHECK(m.records.empty());
    CHECK(fs::exists(dir / "out" / "manifest.jsonl"));
    CHECK(fs::file_size(dir / "out" / "manifest.jsonl") == 0);
}

TEST_CASE("output trees are byte-identical across runs and worker counts")
{
    TempDir dir("curvisynth_pipe1");
    make_targets(dir / "targets", 3, 120, 100);
    auto cfg = small_config(dir / "targets", dir / "a");
    run(cfg);
    cfg.output_dir = dir / "b";
    cfg.jobs = 3;
    run(cfg);
    const auto a = read_tree(dir / "a");
    const auto b = read_tree(dir / "b");
    CHECK(a.size() > 6 * 4);
    CHECK(a == b);

    cfg.output_dir = dir / "c";
    cfg.seed = 12;
    run(cfg);
    CHECK(read_tree(dir / "c") != a);
}

TEST_CASE("manifest records point at consistent files")
{
    TempDir dir("curvisynth_pipe2");
    make_targets(dir / "targets", 2, 96, 96);
    const auto cfg = small_config(dir / "targets", dir / "out");
    const auto m = run(cfg);
    REQUIRE(m.records.size() == 6);
    std::istringstream lines(to_jsonl(m));
    std::string first;
    std::getline(lines, first);
    CHECK(first.rfind("{\"index\":0,\"image\":", 0) == 0);

    for (std::size_t i = 0; i < m.records.size(); ++i) {
        const auto& r = m.records[i];
        CHECK(r.index == static_cast<int>(i));
        CHECK(r.seed == sample_seed(cfg.seed, i));
        const auto image = read_png(dir / "out" / r.image);
        const auto mask = read_mask_png(dir / "out" / r.mask);
        CHECK(image.height == 64);
        CHECK(mask.height == image.height);
        CHECK(mask.width == image.width);
        const auto liot = read_file(dir / "out" / r.liot);
        CHECK(decode_lio1(liot).data == to_tensor(liot_transform(image)).data);
        const auto target = read_png(dir / "out" / r.target_image);
        CHECK(decode_lio1(read_file(dir / "out" / r.target_liot)).data == to_tensor(liot_transform(target)).data);
        CHECK(fs::exists(dir / "targets" / r.source_target));
        CHECK(r.params.segments > 0);
    }
    CHECK(fs::exists(dir / "out" / "config.ini"));
}

TEST_CASE("fractal-only generation writes full-canvas pairs")
{
    TempDir dir("curvisynth_pipe3");
    auto cfg = small_config({}, dir / "out");
    cfg.count = 3;
    const auto m = generate_fractals(cfg);
    REQUIRE(m.records.size() == 3);
    for (const auto& r : m.records) {
        const auto image = read_png(dir / "out" / r.image);
        const auto mask = read_mask_png(dir / "out" / r.mask);
        CHECK(image.height == 96);
        for (std::size_t i = 0; i < image.data.size(); ++i) {
            CHECK((image.data[i] > 0) == (mask.data[i] == 1));
        }
    }
}

TEST_CASE("missing or empty target directory is an error")
{
    TempDir dir("curvisynth_pipe4");
    fs::create_directories(dir / "empty");
    auto cfg = small_config(dir / "empty", dir / "out");
    CHECK_THROWS(run(cfg));
    cfg.target_dir = dir / "nope";
    CHECK_THROWS(run(cfg));
}

TEST_CASE("target fitting crops large sources and upscales small ones")
{
    Rng rng(3);
    GrayImage big(200, 150);
    for (std::size_t i = 0; i < big.data.size(); ++i) {
        big.data[i] = static_cast<std::uint8_t>(i % 251);
    }
    const auto c = fit_target(big, 64, 64, TargetFit::Crop, rng);
    CHECK(c.height == 64);
    CHECK(c.width == 64);
    const auto small = fit_target(GrayImage(20, 30, 1, 9), 64, 64, TargetFit::Crop, rng);
    CHECK(small.height == 64);
    CHECK(small.at(10, 10) == 9);
    const auto r = fit_target(big, 64, 48, TargetFit::Resize, rng);
    CHECK(r.height == 64);
    CHECK(r.width == 48);
}
