#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace regspec {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad size, negative tau, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The probability model violates the standing assumptions (e.g. a zero
/// expected column sum leaves d0 undefined).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// An exact oracle was asked to enumerate beyond its budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// The requested eigenvector is not determined (eigenvalue gap too small).
class IllDefinedEigenvector : public Error {
 public:
  IllDefinedEigenvector(const std::string& what, double gap)
      : Error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

/// An iterative solver ran out of iterations. Carries the best residual norms
/// observed for the wanted pairs.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> residuals)
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace regspec
