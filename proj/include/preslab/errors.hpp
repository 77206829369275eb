#pragma once

#include <stdexcept>
#include <string>

namespace preslab {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SearchExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleDimension : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroMatrixError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotAPreserver : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotUnital : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace preslab
