#pragma once

#include "curvisynth/random.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace curvisynth {

struct Range {
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const Range&, const Range&) = default;
};

/// One rewrite rule F -> rhs. Only F has productions; the turn and
/// bracket symbols are constants.
struct Rule {
    std::string rhs;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Parses "F->F[-F][+F]" (also accepts the unicode arrow and minus sign,
/// or a bare right-hand side).
Rule parse_rule(std::string_view text);

/// Grammar plus the geometric parameters of one fractal tree.
struct LSystemSpec {
    std::string axiom = "F";
    std::vector<Rule> ruleset{Rule{"F[-F][+F]"}};
    int iterations = 1;
    double w_init = 8.0;      // px
    double l_init = 120.0;    // px
    double gamma = 1.0;       // per-depth decay in (0, 1]
    Range angle_init_range{20.0, 120.0};  // degrees
    Range angle_delta_range{10.0, 40.0};  // degrees
    Range intensity_range{1.0, 254.0};    // 8-bit
    std::uint64_t seed = 0;
    /// Draw a rule per F instead of once per rewrite pass.
    bool per_symbol_rule = false;
};

/// Throws ValidationError naming the offending field or rule.
void validate(const LSystemSpec& spec);

/// Returns true if every symbol is in {F,+,-,[,]} and brackets balance.
bool is_well_formed(std::string_view symbols);

using SymbolString = std::string;

/// Applies iterations-1 rewrite passes to the axiom.
SymbolString expand(const LSystemSpec& spec, Rng& rng);

struct BranchParams {
    int index = 1;
    double width = 0.0;
    double length = 0.0;
    std::uint8_t intensity = 0;
};

/// Width and length taper as w_init * gamma^(i-1); intensity is drawn
/// uniformly from the spec's intensity range.
BranchParams schedule_params(int index, const LSystemSpec& spec, Rng& rng);

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

struct Segment {
    Point start;
    Point end;
    double width = 1.0;
    std::uint8_t intensity = 255;
    int depth = 1;  // branch index i

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct TurtleProgram {
    std::vector<Segment> segments;

    friend bool operator==(const TurtleProgram&, const TurtleProgram&) = default;
};

/// Interprets a symbol string with a turtle.
///
/// Headings are in degrees in image coordinates (x right, y down), so a
/// positive turn is clockwise on screen: '+' turns clockwise and '-'
/// anticlockwise, each by delta_init +/- delta_delta with all three parts
/// (init, delta, sign) drawn fresh per turn symbol. '[' saves the turtle
/// and enters the next branch depth; ']' restores it. Branch parameters
/// are drawn once per depth and shared by every F at that depth.
///
/// The root is placed uniformly in the central half of the canvas with a
/// uniform initial heading.
TurtleProgram build_program(std::string_view symbols, const LSystemSpec& spec, int canvas_height,
                            int canvas_width, Rng& rng);

/// Same as above with an explicit root and heading (degrees).
TurtleProgram build_program_at(std::string_view symbols, const LSystemSpec& spec, Point root,
                               double heading_deg, Rng& rng);

} // namespace curvisynth
