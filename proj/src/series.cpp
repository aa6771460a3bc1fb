#include "heatlab/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace heatlab {

namespace {

// B_{2k} / (2k)! for k = 1..5.
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 12.0,                  // B2 / 2!
    -1.0 / 720.0,                // B4 / 4!
    1.0 / 30240.0,               // B6 / 6!
    -1.0 / 1209600.0,            // B8 / 8!
    1.0 / 47900160.0,            // B10 / 10!
};

}  // namespace

double power_partial_sum(double s, std::uint64_t n) {
  CompensatedSum sum;
  // Smallest terms first.
  for (std::uint64_t i = n; i >= 1; --i) sum.add(std::pow(static_cast<double>(i), -s));
  return sum.value();
}

Estimate power_tail_sum(double s, std::uint64_t n) {
  if (!(s > 1.0)) throw std::invalid_argument("power_tail_sum: s must exceed 1");
  const std::uint64_t start = n + 1;
  const std::uint64_t M = std::max<std::uint64_t>({start, 32, static_cast<std::uint64_t>(std::ceil(8.0 * s))});

  const double Md = static_cast<double>(M);
  // ∫_M^∞ x^{-s} dx + f(M)/2 + Σ_k B_{2k}/(2k)! (s)_{2k-1} M^{-s-2k+1}
  CompensatedSum em;
  const double fM = std::pow(Md, -s);
  em.add(fM * Md / (s - 1.0));
  em.add(0.5 * fM);
  double rising = s;  // (s)_{2k-1}
  double power = fM / Md;
  double last = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double term = kBernoulliOverFactorial[k] * rising * power;
    if (k < 4)
      em.add(term);
    else
      last = term;
    rising *= (s + 2 * k + 1) * (s + 2 * k + 2);
    power /= Md * Md;
  }

  CompensatedSum direct;
  for (std::uint64_t i = M - 1; i >= start; --i) direct.add(std::pow(static_cast<double>(i), -s));
  const double value = direct.value() + em.value();
  const double error = 2.0 * std::abs(last) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
  return {value, error, EstimateKind::DeterministicTol, 0.0};
}

Estimate zeta(double s) { return power_tail_sum(s, 0); }

}  // namespace heatlab
