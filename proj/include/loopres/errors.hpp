#pragma once

#include <stdexcept>
#include <string>

namespace loopres {

/// Bad user-supplied parameter (non-positive loss, zero-modulus phase sweep, ...).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: singular matrix, eigensolver breakdown, field blow-up.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Iteration did not reach its tolerance within the allowed horizon.
struct convergence_error : numerical_error {
    convergence_error(const std::string& what, double residual)
        : numerical_error(what), final_residual(residual) {}
    double final_residual;
};

/// Config file problem; line is 1-based, 0 when not tied to a line.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + what
                                         : what),
          line(line_no) {}
    int line;
};

/// Scene geometry violates the grid layout rules.
struct geometry_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace loopres
