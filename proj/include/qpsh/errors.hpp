#pragma once

#include <stdexcept>
#include <string>

namespace qpsh {

// The CLI maps each of these to its own exit status.

/// Malformed input files or arguments.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain (wrong sizes, non-hyperhermitian
/// input, under-resolved kernels, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative method did not reach its tolerance, or a numerical consistency
/// check inside an algorithm failed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qpsh
