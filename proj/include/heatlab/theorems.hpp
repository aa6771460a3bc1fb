#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "heatlab/estimate.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

/// Resources for one verification. Monte Carlo checks draw `samples` points
/// per grid time on stream (seed, grid index); deterministic ones use `tol`.
struct Budget {
  std::uint64_t samples = 1'000'000;
  double tol = 1e-12;
  double sigma_mult = 3.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// K1 G_mu <= H <= K2 G_mu with the constants of liyau_constant(m).
/// Single balls are handled by quadrature, larger unions by Monte Carlo with
/// H and G_mu sharing their sample points. ratio = H / G_mu.
VerificationReport verify_theorem1(const BallUnion& omega, std::span<const double> t_grid, const Budget& budget);

/// L1 G_nu <= F <= L2 G_nu. ratio = F / G_nu.
VerificationReport verify_theorem2(const BallUnion& omega, std::span<const double> t_grid, const Budget& budget);

/// The two estimates behind the summability criterion on a finite window:
/// H(t) >= (4 pi t)^{-m/2} e^{-r_1^2/t} omega_m^2 Σ r_i^{2m} on the grid, and
/// G_mu at t = delta^2/4 <= omega_m (4/delta)^m Σ r_i^{2m} (last row).
VerificationReport verify_theorem3i(const BallUnion& window, SeparationGap delta, std::span<const double> t_grid,
                                    const Budget& budget);

/// |H - Σ_i H_{B_i}| <= omega_m^2 e^{-delta^2/8t} (sqrt2/delta + (4 pi t)^{-1/2})^m Σ r_i^{2m}.
///
/// The left side is estimated as |Omega| times the fraction of Gaussian jumps
/// that land in a ball other than their starting one. Its expectation is
/// exactly H - Σ H_{B_i}, and it avoids subtracting two nearly equal numbers.
VerificationReport verify_decoupling(const BallUnion& window, SeparationGap delta, std::span<const double> t_grid,
                                     const Budget& budget);

/// Result of the sum-integral comparison for monotone f (increasing) and
/// g (decreasing) on the first N integers.
struct Lemma2Gap {
  double lhs = 0.0;        ///< |Σ_{i<=N} f(i) g(i) - ∫_1^{N+1} f g|
  double rhs = 0.0;        ///< Σ_{i<=N} f(i+1)(g(i) - g(i+1)) + f(N+1) g(N+1)
  double quad_error = 0.0; ///< certified error of the integral
  bool holds = false;      ///< lhs <= rhs + quad_error
};

/// Finite-N form of the sum-integral lemma. The boundary term f(N+1) g(N+1)
/// vanishes as N grows when fg is summable; without it the finite statement
/// fails, e.g. for constant f and g. Monotonicity of f and g is checked at
/// the integers 1..N+1 and at `probe` points per unit interval; violations
/// throw std::invalid_argument.
Lemma2Gap lemma2_gap(const std::function<double(double)>& f, const std::function<double(double)>& g,
                     std::uint64_t N, double tol = 1e-12, int probe = 8);

/// Grid checks of the basic facts. H must be decreasing and midpoint
/// log-convex; F increasing, concave and subadditive (F(t_i + t_j) is
/// compared wherever t_i + t_j is itself a grid time). Grids must be sorted
/// by t (std::invalid_argument otherwise). Log-convexity is tested for every
/// triple of consecutive points in its general form
///   log H(t2) <= ((t3-t2) log H(t1) + (t2-t1) log H(t3)) / (t3 - t1),
/// which is the midpoint statement when t2 is the midpoint.
VerificationReport verify_basic_facts(std::span<const std::pair<double, Estimate>> h_grid,
                                      std::optional<std::span<const std::pair<double, Estimate>>> f_grid = std::nullopt,
                                      double sigma_mult = 3.0);

}  // namespace heatlab
