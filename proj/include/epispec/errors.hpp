#pragma once

#include <stdexcept>
#include <string>

namespace epispec {

// Problems with input content or structure: malformed files, invalid
// parameters, violated structural preconditions (disconnected graph where
// connectivity is required, zero-degree nodes for normalized operators, ...).
// CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures: eigensolver non-convergence, unstable integration,
// loss of positivity. CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace epispec
