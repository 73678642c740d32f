#pragma once

#include <stdexcept>
#include <string>

namespace specband {

// Bad argument or configuration supplied by the caller. The CLI maps this to
// exit code 1.
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed or unusable input data (files, ratings tables). The CLI maps this
// to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure inside an algorithm (eigensolver, factorization, invariant
// violation under --check-invariants).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace specband
