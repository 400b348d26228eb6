#pragma once

#include <stdexcept>
#include <string>

namespace archicop {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed call: empty input, mismatched lengths, unsorted data.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Index beyond a precomputed table.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A target value lies outside the attainable range of a dependence measure.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double bound, bool upper)
      : Error(what), bound_(bound), upper_(upper) {}
  double bound() const noexcept { return bound_; }
  bool upper() const noexcept { return upper_; }

 private:
  double bound_;
  bool upper_;
};

/// Root finder called on an interval without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Objective or integrand produced NaN, or a derived quantity could not be evaluated.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver ran out of iterations. Carries the best iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_x, double best_f)
      : Error(what), best_x_(best_x), best_f_(best_f) {}
  double best_x() const noexcept { return best_x_; }
  double best_f() const noexcept { return best_f_; }

 private:
  double best_x_;
  double best_f_;
};

/// A signed log-space sum came out non-positive. `residual_*` is the
/// signed-log value of what was left after cancellation.
class CancellationError : public DomainError {
 public:
  CancellationError(const std::string& what, int residual_sign, double residual_logabs)
      : DomainError(what), sign_(residual_sign), logabs_(residual_logabs) {}
  int residual_sign() const noexcept { return sign_; }
  double residual_logabs() const noexcept { return logabs_; }

 private:
  int sign_;
  double logabs_;
};

/// One evaluation strategy could not deliver an accurate value; callers may
/// fall through to another strategy.
class MethodFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace archicop
