#pragma once

#include <stdexcept>

namespace nfactor {

// Bad caller input: invalid dimensions, non-finite data, malformed specs.
// The CLI maps this class to exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure inside an otherwise valid computation (solver
// non-convergence, degenerate spectra). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nfactor
