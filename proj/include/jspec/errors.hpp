#ifndef JSPEC_ERRORS_HPP
#define JSPEC_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace jspec {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Gamma-type function was asked for its value at a pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration exhausted its term/iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Jacobi coefficient violating a_k > 0 or finiteness.
class CoefficientError : public Error {
 public:
  using Error::Error;
};

/// Sequence index outside the evaluated or admissible range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Wronskian too small for the Green kernel formula to be meaningful.
class DegenerateWronskian : public Error {
 public:
  using Error::Error;
};

/// Stieltjes transform of an indeterminate operator: depends on the extension.
class ExtensionAmbiguous : public Error {
 public:
  using Error::Error;
};

/// c-function regularity assumption violated (double zero or coincident zeros).
class RegularityError : public Error {
 public:
  using Error::Error;
};

/// Continued fraction did not settle; carries the best available estimate.
class SlowConvergence : public Error {
 public:
  SlowConvergence(const std::string& what, std::complex<double> estimate,
                  double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}

  std::complex<double> estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

}  // namespace jspec

#endif  // JSPEC_ERRORS_HPP
