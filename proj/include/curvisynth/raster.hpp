#pragma once

#include "curvisynth/image.hpp"
#include "curvisynth/lsystem.hpp"

namespace curvisynth {

/// Rendered fractal intensities together with the binary stroke mask.
struct FractalImage {
    GrayImage pixels;
    Mask mask;
};

/// True if the pixel center (px + 0.5, py + 0.5) lies within width/2 of
/// the segment's center line (closed capsule).
bool covers(const Segment& seg, int px, int py);

/// Draws every segment as a hard-edged capsule. Overlaps keep the maximum
/// intensity; the mask is the union of footprints. Canvas must be at
/// least 16x16.
FractalImage rasterize(const TurtleProgram& program, int height, int width);

} // namespace curvisynth
