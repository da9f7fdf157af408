#pragma once

#include <stdexcept>
#include <string>

namespace fourq {

// Precondition violations on caller-supplied arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for failures caused by the numerics rather than by the caller's types.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A feature (mode waist, mask period) is not resolved by the grid.
class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Input and output grids violate the lens reciprocity relation.
class SamplingError : public NumericError {
 public:
  using NumericError::NumericError;
};

// A truncated lattice expansion discards too much probability.
class TruncationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace fourq
