#pragma once

#include <stdexcept>
#include <string>

namespace migo {

// Bad input: malformed states, rule files, configs. CLI exit code 1.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A runtime contract was broken (corrupt oracle, non-optimal opponent,
// illegal agent move). CLI exit code 2.
struct InvariantViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : ValidationError {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : ValidationError(msg + " at line " + std::to_string(line_) + ", column " +
                          std::to_string(col_)),
          line(line_),
          column(col_) {}
};

} // namespace migo
