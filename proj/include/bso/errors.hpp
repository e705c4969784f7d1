// errors.hpp — exception types shared by all solvers

#pragma once

#include <stdexcept>

namespace bso {

// Thrown when an input violates a documented precondition or type invariant.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Thrown when a numerical routine cannot meet its accuracy contract
// (step-size underflow, divergence, unexpected loss of normalization).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bso
