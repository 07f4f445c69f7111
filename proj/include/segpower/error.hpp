#pragma once

#include <stdexcept>
#include <string>

namespace segpower {

// Argument outside the domain of a distribution kernel (p not in (0,1), df <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Both sample variances are zero, so the Welch degrees of freedom are undefined.
class DegenerateSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too many unit-cube points never reach the rejection region below the
// sample-size bound, so the requested power quantile is not identifiable.
class BoundTooSmall : public std::runtime_error {
 public:
  BoundTooSmall(const std::string& what, double bound)
      : std::runtime_error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

// No finite sample size satisfies the requested design.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace segpower
