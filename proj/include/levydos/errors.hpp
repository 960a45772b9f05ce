#pragma once

#include <stdexcept>
#include <string>

namespace levydos {

// Bad parameters, malformed input, or a request outside a routine's domain.
// The command line tool maps this to exit code 2.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An iteration, extrapolation, or quadrature failed to reach its tolerance.
// The command line tool maps this to exit code 3.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace levydos
