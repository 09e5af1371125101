#pragma once

#include <stdexcept>
#include <string>

namespace blocc {

// Malformed input: unnormalized vectors, negative entries, dimension mismatches.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematically undefined request, e.g. a logarithm of a zero coefficient.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A theorem evaluator was called outside the hypotheses of its theorem.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The battery window, shifted by the largest quantized work value, leaves {0,...,n}.
class BatteryTooSmall : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace blocc
