#pragma once

#include <stdexcept>
#include <string>

namespace causalbet {

// Input exceeds a configured size cap (brute-force enumeration, expansion).
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form moments are maintained only up to triple intersections.
struct UnsupportedOrder : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conditioning event (or a factor of a ratio) has probability zero.
struct ConditionOnNull : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two events in a family denote the same atom set.
struct DuplicateEvents : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    int line;  // 1-based input line, 0 when not attributable
    ParseError(int line_no, const std::string& what)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                         : what),
          line(line_no) {}
};

}  // namespace causalbet
