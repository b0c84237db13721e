#ifndef EMPVIX_ERROR_H_
#define EMPVIX_ERROR_H_

#include <stdexcept>
#include <string>

namespace empvix {

// Malformed or invalid input: unreadable files, bad rows, failed validation.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A computation could not produce a trustworthy number.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The quantile polynomial fit was rejected (conditioning or monotonicity).
class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace empvix

#endif  // EMPVIX_ERROR_H_
