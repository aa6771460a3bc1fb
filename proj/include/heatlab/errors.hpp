#pragma once

#include <stdexcept>
#include <string>

namespace heatlab {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class OverlappingBalls : public Error {
 public:
  using Error::Error;
};

class NonPositiveGap : public Error {
 public:
  using Error::Error;
};

/// An iterative numeric procedure ran out of budget. Carries the best value
/// seen so far and the error it had reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value, double achieved_error)
      : Error(what), best_value_(best_value), achieved_error_(achieved_error) {}

  double best_value() const noexcept { return best_value_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double best_value_;
  double achieved_error_;
};

}  // namespace heatlab
