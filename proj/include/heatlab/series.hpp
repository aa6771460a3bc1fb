#pragma once

#include <cstdint>

#include "heatlab/estimate.hpp"

namespace heatlab {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Σ_{i > n} i^{-s} for s > 1.
///
/// Sums directly up to an index M >= max(n + 1, 32, 8s), then applies
/// Euler–Maclaurin at M with four Bernoulli corrections. x^{-s} is completely
/// monotone, so the neglected remainder is smaller than the first omitted
/// correction; twice that term is reported as the error.
Estimate power_tail_sum(double s, std::uint64_t n);

/// Riemann zeta ζ(s) for s > 1 with a certified error.
Estimate zeta(double s);

/// Σ_{i=1}^{n} i^{-s}, compensated.
double power_partial_sum(double s, std::uint64_t n);

}  // namespace heatlab
