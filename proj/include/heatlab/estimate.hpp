#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace heatlab {

enum class EstimateKind { DeterministicTol, MonteCarloSe };

constexpr std::string_view to_string(EstimateKind kind) {
  return kind == EstimateKind::DeterministicTol ? "deterministic-tol" : "monte-carlo-se";
}

/// A computed quantity together with its error.
///
/// For `DeterministicTol` the error is an absolute bound on |value - exact|;
/// `budget` is the tolerance that was requested. For `MonteCarloSe` the error
/// is one standard error and `budget` is the sample count.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  EstimateKind kind = EstimateKind::DeterministicTol;
  double budget = 0.0;

  static Estimate exact(double v) { return {v, 0.0, EstimateKind::DeterministicTol, 0.0}; }
};

/// Error of a + b (or a - b). Deterministic bounds add linearly, standard
/// errors in quadrature; a mix is treated as deterministic.
inline double combined_error(const Estimate& a, const Estimate& b) {
  if (a.kind == EstimateKind::MonteCarloSe && b.kind == EstimateKind::MonteCarloSe)
    return std::hypot(a.error, b.error);
  return a.error + b.error;
}

}  // namespace heatlab
