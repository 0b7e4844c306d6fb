#include "curvisynth/lsystem.hpp"

#include "curvisynth/image.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace curvisynth {

namespace {

bool is_symbol(char c)
{
    return c == 'F' || c == '+' || c == '-' || c == '[' || c == ']';
}

// Replaces the UTF-8 minus sign (U+2212) with '-' and drops whitespace.
std::string normalize(std::string_view text)
{
    static constexpr std::string_view kMinus = "\xE2\x88\x92";
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text.substr(i, kMinus.size()) == kMinus) {
            out.push_back('-');
            i += kMinus.size();
            continue;
        }
        if (text[i] != ' ' && text[i] != '\t') {
            out.push_back(text[i]);
        }
        ++i;
    }
    return out;
}

void check_range(const Range& r, const char* name)
{
    if (!(r.min <= r.max) || !std::isfinite(r.min) || !std::isfinite(r.max)) {
        throw ValidationError(std::string(name) + " must satisfy min <= max");
    }
}

} // namespace

bool is_well_formed(std::string_view symbols)
{
    int depth = 0;
    for (char c : symbols) {
        if (!is_symbol(c)) {
            return false;
        }
        if (c == '[') {
            ++depth;
        } else if (c == ']' && --depth < 0) {
            return false;
        }
    }
    return depth == 0;
}

Rule parse_rule(std::string_view text)
{
    std::string s = normalize(text);
    std::string rhs = s;
    for (std::string_view arrow : {std::string_view("->"), std::string_view("\xE2\x86\x92")}) {
        if (auto pos = s.find(arrow); pos != std::string::npos) {
            if (s.substr(0, pos) != "F") {
                throw ValidationError("rule '" + std::string(text) + "': only F may be rewritten");
            }
            rhs = s.substr(pos + arrow.size());
            break;
        }
    }
    if (rhs.empty() || !is_well_formed(rhs)) {
        throw ValidationError("malformed rule '" + std::string(text) +
                              "': right-hand side must use only F + - [ ] with balanced brackets");
    }
    return Rule{rhs};
}

void validate(const LSystemSpec& spec)
{
    if (spec.axiom.empty() || !is_well_formed(spec.axiom)) {
        throw ValidationError("malformed axiom '" + spec.axiom + "'");
    }
    if (spec.ruleset.empty()) {
        throw ValidationError("ruleset must not be empty");
    }
    for (std::size_t i = 0; i < spec.ruleset.size(); ++i) {
        const auto& rhs = spec.ruleset[i].rhs;
        if (rhs.empty() || !is_well_formed(rhs)) {
            throw ValidationError("malformed rule " + std::to_string(i + 1) + " 'F->" + rhs +
                                  "': right-hand side must use only F + - [ ] with balanced brackets");
        }
    }
    if (spec.iterations < 1) {
        throw ValidationError("iterations must be >= 1");
    }
    if (!(spec.gamma > 0.0 && spec.gamma <= 1.0)) {
        throw ValidationError("gamma must lie in (0, 1]");
    }
    if (!(spec.w_init > 0.0) || !(spec.l_init > 0.0)) {
        throw ValidationError("w_init and l_init must be positive");
    }
    check_range(spec.angle_init_range, "angle_init_range");
    check_range(spec.angle_delta_range, "angle_delta_range");
    check_range(spec.intensity_range, "intensity_range");
    if (spec.intensity_range.min < 0.0 || spec.intensity_range.max > 255.0) {
        throw ValidationError("intensity_range must lie within [0, 255]");
    }
}

SymbolString expand(const LSystemSpec& spec, Rng& rng)
{
    validate(spec);
    const auto pick = [&]() -> const std::string& {
        if (spec.ruleset.size() == 1) {
            return spec.ruleset.front().rhs;
        }
        return spec.ruleset[rng.below(spec.ruleset.size())].rhs;
    };

    SymbolString current = spec.axiom;
    for (int pass = 1; pass < spec.iterations; ++pass) {
        SymbolString next;
        const std::string* pass_rule = spec.per_symbol_rule ? nullptr : &pick();
        for (char c : current) {
            if (c == 'F') {
                next += pass_rule ? *pass_rule : pick();
            } else {
                next.push_back(c);
            }
        }
        current = std::move(next);
    }
    return current;
}

BranchParams schedule_params(int index, const LSystemSpec& spec, Rng& rng)
{
    if (index < 1) {
        throw ValidationError("branch index must be >= 1");
    }
    const double taper = std::pow(spec.gamma, index - 1);
    const auto lo = static_cast<std::int64_t>(std::ceil(spec.intensity_range.min));
    const auto hi = static_cast<std::int64_t>(std::floor(spec.intensity_range.max));
    BranchParams p;
    p.index = index;
    p.width = spec.w_init * taper;
    p.length = spec.l_init * taper;
    p.intensity = static_cast<std::uint8_t>(hi >= lo ? rng.uniform_int(lo, hi) : lo);
    return p;
}

TurtleProgram build_program(std::string_view symbols, const LSystemSpec& spec, int canvas_height,
                            int canvas_width, Rng& rng)
{
    const Point root{rng.uniform(0.25 * canvas_width, 0.75 * canvas_width),
                     rng.uniform(0.25 * canvas_height, 0.75 * canvas_height)};
    const double heading = rng.uniform(0.0, 360.0);
    return build_program_at(symbols, spec, root, heading, rng);
}

TurtleProgram build_program_at(std::string_view symbols, const LSystemSpec& spec, Point root,
                               double heading_deg, Rng& rng)
{
    struct Turtle {
        Point pos;
        double heading;
        int depth;
    };

    TurtleProgram program;
    std::vector<std::optional<BranchParams>> by_depth;
    std::vector<Turtle> stack;
    Turtle t{root, heading_deg, 1};

    for (char c : symbols) {
        switch (c) {
        case 'F': {
            if (static_cast<std::size_t>(t.depth) > by_depth.size()) {
                by_depth.resize(static_cast<std::size_t>(t.depth));
            }
            auto& params = by_depth[static_cast<std::size_t>(t.depth - 1)];
            if (!params) {
                params = schedule_params(t.depth, spec, rng);
            }
            const double rad = t.heading * std::numbers::pi / 180.0;
            const Point end{t.pos.x + params->length * std::cos(rad), t.pos.y + params->length * std::sin(rad)};
            program.segments.push_back(Segment{t.pos, end, params->width, params->intensity, t.depth});
            t.pos = end;
            break;
        }
        case '+':
        case '-': {
            const double base = rng.uniform(spec.angle_init_range.min, spec.angle_init_range.max);
            const double delta = rng.uniform(spec.angle_delta_range.min, spec.angle_delta_range.max);
            const double turn = rng.bernoulli(0.5) ? base + delta : base - delta;
            t.heading += (c == '+') ? turn : -turn;
            break;
        }
        case '[':
            stack.push_back(t);
            ++t.depth;
            break;
        case ']':
            if (stack.empty()) {
                throw ValidationError("malformed symbol string: ']' without matching '['");
            }
            t = stack.back();
            stack.pop_back();
            break;
        default:
            throw ValidationError(std::string("malformed symbol string: unexpected symbol '") + c + "'");
        }
    }
    return program;
}

} // namespace curvisynth
