#pragma once

#include <stdexcept>
#include <string>

namespace levyou {

// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Input is well-formed but carries no information (constant path, zero variance).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A log-based estimator met a nonpositive observation.
struct PositivityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moment fit impossible for the requested family (e.g. nonpositive mean for a subordinator).
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input file.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace levyou
