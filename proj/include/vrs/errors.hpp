#pragma once

#include <stdexcept>

namespace vrs {

// Bad user input (parameters, config, out-of-range arguments). CLI exit code 1.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical failure (solver breakdown, non-convergence, consistency violation).
// CLI exit code 2.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vrs
