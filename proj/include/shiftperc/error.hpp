#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shiftperc {

enum class errc {
    not_increasing,
    not_progressive,
    image_collision,
    length_mismatch,
    arity_mismatch,
    too_large,
    too_small,
    cycle_detected,
    bad_arity,
    degenerate_threshold,
    empty_family,
    arity_too_large,
    incompatible_coloring,
    tie_detected,
    budget_exceeded,
    not_shift_graph,
    no_crossing,
    unknown_command,
    parse_error,
};

inline std::string_view to_string(errc code) {
    switch (code) {
    case errc::not_increasing: return "NotIncreasing";
    case errc::not_progressive: return "NotProgressive";
    case errc::image_collision: return "ImageCollision";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::too_large: return "TooLarge";
    case errc::too_small: return "TooSmall";
    case errc::cycle_detected: return "CycleDetected";
    case errc::bad_arity: return "BadArity";
    case errc::degenerate_threshold: return "DegenerateThreshold";
    case errc::empty_family: return "EmptyFamily";
    case errc::arity_too_large: return "ArityTooLarge";
    case errc::incompatible_coloring: return "IncompatibleColoring";
    case errc::tie_detected: return "TieDetected";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_shift_graph: return "NotShiftGraph";
    case errc::no_crossing: return "NoCrossing";
    case errc::unknown_command: return "UnknownCommand";
    case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

// Budget-type failures map to a distinct CLI exit code.
inline bool is_budget_error(errc code) {
    return code == errc::too_large || code == errc::budget_exceeded || code == errc::arity_too_large;
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace shiftperc
