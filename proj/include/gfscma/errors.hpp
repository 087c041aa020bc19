#pragma once

#include <stdexcept>
#include <string>

namespace gfscma {

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text-format errors carry the offending location.
struct ParseError : std::runtime_error {
    int line = 0;
    int column = 0;
    ParseError(const std::string& msg, int line_, int col_)
        : std::runtime_error(msg + " (line " + std::to_string(line_) +
                             ", column " + std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

// A domain-type invariant failed; `check` names the violated rule.
struct InvariantError : std::runtime_error {
    std::string check;
    InvariantError(const std::string& check_, const std::string& msg)
        : std::runtime_error(check_ + ": " + msg), check(check_) {}
};

} // namespace gfscma
