#pragma once

// Test-only reference computations. Each one takes a different route from
// the library code it checks: recursive rewriting instead of iterated
// passes, all-pixels brute force instead of bounding boxes, O(N^4) DFT
// instead of FFTW, dense 2-D convolution instead of separable passes,
// pair counting instead of ROC integration.

#include "curvisynth/fourier.hpp"
#include "curvisynth/image.hpp"
#include "curvisynth/losses.hpp"
#include "curvisynth/lsystem.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using namespace curvisynth;

/// Word generated by one F after `depth` rewrites with a single rule.
inline std::string rewrite_word(const std::string& rhs, int depth)
{
    if (depth == 0) {
        return "F";
    }
    std::string out;
    for (char c : rhs) {
        out += (c == 'F') ? rewrite_word(rhs, depth - 1) : std::string(1, c);
    }
    return out;
}

inline std::string rewrite(const std::string& axiom, const std::string& rhs, int iterations)
{
    std::string out;
    for (char c : axiom) {
        out += (c == 'F') ? rewrite_word(rhs, iterations - 1) : std::string(1, c);
    }
    return out;
}

/// Distance from p to segment ab: nearest endpoint, or the perpendicular
/// foot when it falls between the endpoints.
inline double dist2_to_segment(double px, double py, const Segment& s)
{
    const double ax = s.start.x, ay = s.start.y, bx = s.end.x, by = s.end.y;
    const double da = (px - ax) * (px - ax) + (py - ay) * (py - ay);
    const double db = (px - bx) * (px - bx) + (py - by) * (py - by);
    double best = std::min(da, db);
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    if (len2 > 0.0) {
        const double t = ((px - ax) * vx + (py - ay) * vy) / len2;
        if (t > 0.0 && t < 1.0) {
            const double fx = ax + t * vx, fy = ay + t * vy;
            best = std::min(best, (px - fx) * (px - fx) + (py - fy) * (py - fy));
        }
    }
    return best;
}

struct RasterResult {
    GrayImage pixels;
    Mask mask;
};

inline RasterResult brute_force_raster(const TurtleProgram& program, int h, int w)
{
    RasterResult r{GrayImage(h, w), Mask(h, w)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (const auto& s : program.segments) {
                const double rad = s.width / 2.0;
                if (dist2_to_segment(x + 0.5, y + 0.5, s) <= rad * rad) {
                    r.mask.at(y, x) = 1;
                    if (s.intensity > r.pixels.at(y, x)) {
                        r.pixels.at(y, x) = s.intensity;
                    }
                }
            }
        }
    }
    return r;
}

/// Direct O((HW)^2) forward DFT.
inline ComplexImage direct_dft(const RealImage& img)
{
    const int h = img.height, w = img.width;
    ComplexImage out(h, w);
    for (int u = 0; u < h; ++u) {
        for (int v = 0; v < w; ++v) {
            std::complex<double> acc = 0.0;
            for (int y = 0; y < h; ++y) {
                for (int x = 0; x < w; ++x) {
                    const double ang = -2.0 * std::numbers::pi * (static_cast<double>(u * y) / h + static_cast<double>(v * x) / w);
                    acc += img.at(y, x) * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            }
            out.at(u, v) = acc;
        }
    }
    return out;
}

/// Direct inverse DFT, returning the full complex result.
inline ComplexImage direct_idft(const ComplexImage& c)
{
    const int h = c.height, w = c.width;
    ComplexImage out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::complex<double> acc = 0.0;
            for (int u = 0; u < h; ++u) {
                for (int v = 0; v < w; ++v) {
                    const double ang = 2.0 * std::numbers::pi * (static_cast<double>(u * y) / h + static_cast<double>(v * x) / w);
                    acc += c.at(u, v) * std::complex<double>(std::cos(ang), std::sin(ang));
                }
            }
            out.at(y, x) = acc / static_cast<double>(h * w);
        }
    }
    return out;
}

/// Window membership written in signed-frequency form: a frequency index
/// k in [0, n) has signed value k or k - n; the window is the set of
/// signed frequencies in [-floor(side/2), side - floor(side/2) - 1] along
/// each axis, where the DC-centered origin sits at n/2.
inline bool window_contains(int u, int v, int h, int w, int side)
{
    auto centered = [](int k, int n) {
        int c = k + n / 2;
        return c >= n ? c - n : c;
    };
    const int cu = centered(u, h), cv = centered(v, w);
    const int lo_u = h / 2 - side / 2, lo_v = w / 2 - side / 2;
    return side > 0 && cu >= lo_u && cu <= lo_u + side - 1 && cv >= lo_v && cv <= lo_v + side - 1;
}

/// Mirror-101 index by explicit reflection.
inline int mirror(int i, int n)
{
    while (i < 0 || i >= n) {
        if (i < 0) {
            i = -i;
        }
        if (i >= n) {
            i = 2 * (n - 1) - i;
        }
    }
    return i;
}

/// Dense 2-D convolution with the outer-product Gaussian kernel.
inline RealImage dense_gaussian(const RealImage& img, int ksize, double sigma)
{
    const int r = ksize / 2;
    std::vector<double> k2(static_cast<std::size_t>(ksize * ksize));
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            k2[static_cast<std::size_t>((dy + r) * ksize + dx + r)] = v;
            sum += v;
        }
    }
    RealImage out(img.height, img.width);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    acc += k2[static_cast<std::size_t>((dy + r) * ksize + dx + r)] / sum *
                           img.at(mirror(y + dy, img.height), mirror(x + dx, img.width));
                }
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

/// Intensity-order code for one pixel and one direction, by listing the
/// eight neighbor coordinates explicitly.
inline int liot_code(const GrayImage& img, int y, int x, int dy, int dx)
{
    int code = 0;
    for (int m = 1; m <= 8; ++m) {
        int ny = y + dy * m, nx = x + dx * m;
        ny = ny < 0 ? 0 : (ny >= img.height ? img.height - 1 : ny);
        nx = nx < 0 ? 0 : (nx >= img.width ? img.width - 1 : nx);
        if (img.at(y, x) > img.at(ny, nx)) {
            code += 1 << (m - 1);
        }
    }
    return code;
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half. Equals the trapezoidal ROC area.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels)
{
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) {
            continue;
        }
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) {
                continue;
            }
            pairs += 1.0;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    return wins / pairs;
}

inline double clamp_prob(double p)
{
    return std::min(std::max(p, 1e-7), 1.0 - 1e-7);
}

/// Adversarial and segmentation terms as plain sums over pixels.
inline double scalar_discriminator(const ProbMap& s, const ProbMap& t)
{
    double a = 0.0;
    for (double v : s.values) {
        a += std::log(clamp_prob(v));
    }
    double b = 0.0;
    for (double v : t.values) {
        b += std::log(1.0 - clamp_prob(v));
    }
    return -(a / static_cast<double>(s.size()) + b / static_cast<double>(t.size()));
}

inline double scalar_psal(const ProbMap& t)
{
    double a = 0.0;
    for (double v : t.values) {
        a -= std::log(clamp_prob(v));
    }
    return a / static_cast<double>(t.size());
}

inline double scalar_bce(const ProbMap& g, const ProbMap& y)
{
    double a = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = clamp_prob(y.values[i]);
        a -= g.values[i] * std::log(p) + (1.0 - g.values[i]) * std::log(1.0 - p);
    }
    return a / static_cast<double>(g.size());
}

/// Normalized sum of a set of vectors.
inline std::vector<double> mean_direction(const std::vector<std::vector<double>>& keys)
{
    std::vector<double> m(keys.front().size(), 0.0);
    for (const auto& k : keys) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i] += k[i];
        }
    }
    double n = 0.0;
    for (double x : m) {
        n += x * x;
    }
    for (auto& x : m) {
        x /= std::sqrt(n);
    }
    return m;
}

/// Softmax-form InfoNCE evaluated without any stabilization.
inline double direct_infonce(const std::vector<std::vector<double>>& queries, const std::vector<double>& anchor,
                             const std::vector<std::vector<double>>& negatives, double tau)
{
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            s += a[i] * b[i];
        }
        return s;
    };
    double total = 0.0;
    for (const auto& q : queries) {
        const double pos = std::exp(dot(q, anchor) / tau);
        double denom = pos;
        for (const auto& k : negatives) {
            denom += std::exp(dot(q, k) / tau);
        }
        total += -std::log(pos / denom);
    }
    return total / static_cast<double>(queries.size());
}

} // namespace oracle
