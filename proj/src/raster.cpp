#include "curvisynth/raster.hpp"

#include <algorithm>
#include <cmath>

namespace curvisynth {

bool covers(const Segment& seg, int px, int py)
{
    const double cx = px + 0.5;
    const double cy = py + 0.5;
    const double dx = seg.end.x - seg.start.x;
    const double dy = seg.end.y - seg.start.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((cx - seg.start.x) * dx + (cy - seg.start.y) * dy) / len2, 0.0, 1.0);
    }
    const double ex = cx - (seg.start.x + t * dx);
    const double ey = cy - (seg.start.y + t * dy);
    const double r = 0.5 * seg.width;
    return ex * ex + ey * ey <= r * r;
}

FractalImage rasterize(const TurtleProgram& program, int height, int width)
{
    if (height < 16 || width < 16) {
        throw ValidationError("canvas must be at least 16x16");
    }
    FractalImage out{GrayImage(height, width), Mask(height, width)};

    for (const auto& seg : program.segments) {
        if (!(seg.width > 0.0) || !std::isfinite(seg.start.x) || !std::isfinite(seg.start.y) ||
            !std::isfinite(seg.end.x) || !std::isfinite(seg.end.y)) {
            throw ValidationError("segment must have positive width and finite endpoints");
        }
        // Bounding box of the capsule in pixel-center space, padded by one
        // pixel so rounding never drops a boundary pixel.
        const double r = 0.5 * seg.width;
        const double x0 = std::min(seg.start.x, seg.end.x) - r - 0.5;
        const double x1 = std::max(seg.start.x, seg.end.x) + r - 0.5;
        const double y0 = std::min(seg.start.y, seg.end.y) - r - 0.5;
        const double y1 = std::max(seg.start.y, seg.end.y) + r - 0.5;
        const int ix0 = std::max(0, static_cast<int>(std::floor(std::max(x0, -1.0))) - 1);
        const int ix1 = std::min(width - 1, static_cast<int>(std::ceil(std::min(x1, static_cast<double>(width)))) + 1);
        const int iy0 = std::max(0, static_cast<int>(std::floor(std::max(y0, -1.0))) - 1);
        const int iy1 = std::min(height - 1, static_cast<int>(std::ceil(std::min(y1, static_cast<double>(height)))) + 1);

        for (int y = iy0; y <= iy1; ++y) {
            for (int x = ix0; x <= ix1; ++x) {
                if (covers(seg, x, y)) {
                    out.mask.at(y, x) = 1;
                    auto& p = out.pixels.at(y, x);
                    p = std::max(p, seg.intensity);
                }
            }
        }
    }
    return out;
}

} // namespace curvisynth
