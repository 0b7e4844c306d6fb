#include "doctest.h"
#include "oracles/oracles.hpp"

#include "curvisynth/raster.hpp"

#include <cmath>
#include <numbers>

using namespace curvisynth;

namespace {

TurtleProgram random_program(Rng& rng, int max_segments, double extent)
{
    TurtleProgram p;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_segments)));
    for (int i = 0; i < n; ++i) {
        Segment s;
        s.start = {rng.uniform(-10, extent + 10), rng.uniform(-10, extent + 10)};
        s.end = {rng.uniform(-10, extent + 10), rng.uniform(-10, extent + 10)};
        s.width = rng.uniform(0.5, 12.0);
        s.intensity = static_cast<std::uint8_t>(rng.uniform_int(1, 255));
        p.segments.push_back(s);
    }
    return p;
}

std::size_t count(const Mask& m)
{
    std::size_t n = 0;
    for (auto v : m.data) {
        n += v;
    }
    return n;
}

} // namespace

TEST_CASE("empty program gives an all-zero canvas")
{
    const auto img = rasterize({}, 32, 48);
    CHECK(img.pixels.height == 32);
    CHECK(img.pixels.width == 48);
    CHECK(count(img.mask) == 0);
    for (auto v : img.pixels.data) {
        CHECK(v == 0);
    }
}

TEST_CASE("canvas smaller than 16x16 is rejected")
{
    CHECK_THROWS_AS(rasterize({}, 15, 64), ValidationError);
    CHECK_THROWS_AS(rasterize({}, 0, 0), ValidationError);
}

TEST_CASE("horizontal stroke covers a capsule of the expected area")
{
    // Center line on a half-integer row so two pixel rows sit either side.
    TurtleProgram p;
    p.segments.push_back(Segment{{10.0, 32.0}, {110.0, 32.0}, 4.0, 200, 1});
    const auto img = rasterize(p, 64, 128);
    const auto n = static_cast<double>(count(img.mask));

    const auto ref = oracle::brute_force_raster(p, 64, 128);
    CHECK(img.mask == ref.mask);
    // Continuous capsule area is 100*4 + pi*2^2; pixel sampling stays
    // within one stroke width per end of it.
    CHECK(std::abs(n - (400.0 + std::numbers::pi * 4.0)) <= 2 * 4.0);
    for (std::size_t i = 0; i < img.mask.data.size(); ++i) {
        if (img.mask.data[i]) {
            CHECK(img.pixels.data[i] == 200);
        }
    }
}

TEST_CASE("duplicated segments render exactly like one")
{
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        auto p = random_program(rng, 5, 64);
        auto doubled = p;
        doubled.segments.insert(doubled.segments.end(), p.segments.begin(), p.segments.end());
        const auto a = rasterize(p, 64, 64);
        const auto b = rasterize(doubled, 64, 64);
        CHECK(a.pixels == b.pixels);
        CHECK(a.mask == b.mask);
    }
}

TEST_CASE("overlapping strokes keep the maximum intensity")
{
    TurtleProgram p;
    p.segments.push_back(Segment{{10, 20}, {50, 20}, 6, 90, 1});
    p.segments.push_back(Segment{{30, 5}, {30, 40}, 6, 150, 1});
    p.segments.push_back(Segment{{30, 5}, {30, 40}, 3, 60, 2});
    const auto img = rasterize(p, 48, 64);
    CHECK(img.pixels.at(20, 30) == 150);
    CHECK(img.pixels.at(20, 15) == 90);
}

TEST_CASE("mask matches the brute-force capsule oracle on random programs")
{
    Rng rng(2024);
    for (int t = 0; t < 100; ++t) {
        const auto p = random_program(rng, 10, 64);
        const auto img = rasterize(p, 64, 64);
        const auto ref = oracle::brute_force_raster(p, 64, 64);
        REQUIRE(img.mask == ref.mask);
        REQUIRE(img.pixels == ref.pixels);
    }
}

TEST_CASE("integer translation translates the output")
{
    Rng rng(77);
    for (int t = 0; t < 30; ++t) {
        auto p = random_program(rng, 6, 40);
        const int dx = static_cast<int>(rng.uniform_int(-8, 8));
        const int dy = static_cast<int>(rng.uniform_int(-8, 8));
        auto moved = p;
        for (auto& s : moved.segments) {
            s.start.x += dx;
            s.end.x += dx;
            s.start.y += dy;
            s.end.y += dy;
        }
        const auto a = rasterize(p, 64, 64);
        const auto b = rasterize(moved, 64, 64);
        // Compare away from the borders where clipping differs.
        for (int y = 10; y < 54; ++y) {
            for (int x = 10; x < 54; ++x) {
                CHECK(b.mask.at(y + dy, x + dx) == a.mask.at(y, x));
                CHECK(b.pixels.at(y + dy, x + dx) == a.pixels.at(y, x));
            }
        }
    }
}

TEST_CASE("nonzero pixels are always labeled")
{
    Rng rng(8);
    for (int t = 0; t < 30; ++t) {
        const auto img = rasterize(random_program(rng, 10, 64), 64, 64);
        for (std::size_t i = 0; i < img.pixels.data.size(); ++i) {
            if (img.pixels.data[i] > 0) {
                CHECK(img.mask.data[i] == 1);
            }
        }
    }
}

TEST_CASE("invalid segments are rejected")
{
    TurtleProgram p;
    p.segments.push_back(Segment{{0, 0}, {10, 10}, 0.0, 10, 1});
    CHECK_THROWS_AS(rasterize(p, 32, 32), ValidationError);
    p.segments[0].width = 2;
    p.segments[0].end.x = std::nan("");
    CHECK_THROWS_AS(rasterize(p, 32, 32), ValidationError);
}
