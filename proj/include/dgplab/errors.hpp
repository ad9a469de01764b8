#pragma once

#include <stdexcept>
#include <string>

namespace dgplab {

/// Invalid parameters or inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point or value lies outside the domain of an operation.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure (solver divergence, non-finite values). Maps to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accept-reject sampling exhausted its attempt budget.
class RejectionBudgetError : public NumericError {
 public:
  RejectionBudgetError(const std::string& what, long attempts, double acceptance_estimate)
      : NumericError(what), attempts_(attempts), acceptance_estimate_(acceptance_estimate) {}
  long attempts() const { return attempts_; }
  double acceptance_estimate() const { return acceptance_estimate_; }

 private:
  long attempts_;
  double acceptance_estimate_;
};

/// An intermediate layer value left [-1, 1] during composition.
class CompositionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A structure outside the hyperprior support.
class SupportError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace dgplab
