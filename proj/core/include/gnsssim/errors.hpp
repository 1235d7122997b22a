#pragma once

#include <stdexcept>
#include <string>

namespace gnss {

/// Malformed input file (RINEX, config). Carries a line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + std::move(msg)
                                       : std::move(msg)),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Ill-conditioned or degenerate geometry (coplanar satellites, coincident points).
class GeometryError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical failure (divergent iteration, non-PSD covariance).
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace gnss
