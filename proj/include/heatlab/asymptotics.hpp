#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatlab/estimate.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

/// Omega = ∪_i B(z_i; a i^{-alpha}) over an enumeration (z_i) of Z^m.
struct LatticeFamily {
  int m = 2;
  double a = 0.25;
  double alpha = 1.0;

  double radius(std::uint64_t i) const;  ///< i >= 1
  double delta() const { return 1.0 - 2.0 * a; }
};

/// Validates m >= 2, 0 < a <= 1/4, alpha > 0.
LatticeFamily make_lattice_family(int m, double a, double alpha);

/// First `count` points of Z^m, ordered by |z|_inf and then lexicographically.
std::vector<std::vector<std::int64_t>> lattice_points(int m, std::size_t count);

/// The first `count` balls of the family as a finite union.
BallUnion lattice_window(const LatticeFamily& family, std::size_t count);

/// All of {-half_width..half_width}^m with a common radius.
BallUnion constant_radius_window(int m, int half_width, double radius);

enum class RegimeId { R1, R2, R3, R4, R5, Borderline };
enum class LeadingConstant { CAlphaM, DAlphaM, Perimeter, None };

std::string_view to_string(RegimeId id);

struct Regime {
  RegimeId id = RegimeId::Borderline;
  /// Power of t in the leading term: of H in R1, of F otherwise.
  double leading_exponent = 0.0;
  LeadingConstant constant_kind = LeadingConstant::None;
  std::string note;
};

/// Case split in alpha. Throws std::domain_error for alpha < 1/(2m).
/// Values within relative 1e-12 of 1/(2m), 1/m, 1/(m-1) or 1/(m-2) are Borderline,
/// except alpha = 1/(m-2) for m > 2, which is the analysed R4.
Regime classify_regime(int m, double alpha);

/// Sum of r_i^{2m} is finite iff 2 m alpha > 1.
bool summability_criterion(int m, double alpha);

/// 2^{m-1-1/alpha} pi^{-m/2} alpha^{-1} Gamma((2m alpha - 1)/(2 alpha)) a^{1/alpha}.
double regime_prefactor(int m, double alpha, double a);

/// Leading constant of H in R1: prefactor times ∫_B ∫_B |x-y|^beta,
/// beta = (1 - 2m alpha)/alpha. Requires 1/(2m) < alpha < 1/m.
Estimate c_constant(int m, double alpha, double a, double tol = 1e-12);

/// Leading constant of F in R2: prefactor times ∫_B ∫_{B^c} |x-y|^beta.
/// Requires 1/m < alpha < 1/(m-1).
Estimate d_constant(int m, double alpha, double a, double tol = 1e-12);

/// E|x - y|^{2k} for x, y independent uniform on the unit ball, k = 0..count-1.
const std::vector<double>& unit_ball_distance_moments(int m, std::size_t count);

/// H of B(0; r) from its small-ball expansion
///   (4 pi t)^{-m/2} omega_m^2 r^{2m} Σ_k (-1)^k M_{2k} (r^2/4t)^k / k!,
/// valid and rapidly convergent for r^2 <= 4t.
Estimate small_ball_heat_content(int m, double r, double t);

/// Right-hand side of the decoupling bound,
///   omega_m^2 e^{-delta^2/8t} (sqrt2/delta + (4 pi t)^{-1/2})^m sum_r2m.
double decoupling_bound(int m, double delta, double t, double sum_r2m);

/// Σ_i r_i^p = a^p zeta(p alpha), requires p alpha > 1.
Estimate lattice_radius_power_sum(const LatticeFamily& family, double p);
Estimate lattice_volume(const LatticeFamily& family);
Estimate lattice_perimeter(const LatticeFamily& family);

struct LatticeBudget {
  std::uint64_t max_balls = 4'000'000;
  unsigned threads = 1;
};

/// A certified lattice sum. `balls` is Σ_i H_{B_i} (or Σ_i F_i) alone;
/// `estimate` adds the midpoint of the cross-term interval [0, cross_bound].
struct LatticeSum {
  Estimate estimate;
  Estimate balls;
  std::uint64_t explicit_balls = 0;
  double quadrature_error = 0.0;
  double tail_error = 0.0;
  double cross_bound = 0.0;
};

/// H_Omega(t) for the infinite family with certified error <= eps.
///
/// Balls with r_i^2 > 4t are integrated one by one; the remaining tail is
/// summed in closed form through the small-ball expansion and zeta tails.
/// The off-diagonal part lies in [0, decoupling_bound]. Throws
/// ConvergenceError when eps cannot be met (e.g. the cross bound alone
/// exceeds it, or more than budget.max_balls balls would be needed).
LatticeSum lattice_heat_content(const LatticeFamily& family, double t, double eps, const LatticeBudget& budget = {});

/// F_Omega(t), requires alpha > 1/m. Same certification as above.
LatticeSum lattice_heat_loss(const LatticeFamily& family, double t, double eps, const LatticeBudget& budget = {});

/// The monotone sum-integral sandwich
///   ∫_1^∞ h(x) dx <= Σ_i h(i) <= ∫_0^∞ h(x) dx,  h(x) = H_{B(0; a x^{-alpha})}(t),
/// evaluated numerically. `head` is ∫_0^1 h, bounded by omega_m a^m / (1 - m alpha).
struct SumIntegralSandwich {
  double t = 0.0;
  Estimate lower;  ///< ∫_1^∞ h
  Estimate sum;    ///< Σ_i h(i)
  Estimate upper;  ///< ∫_0^∞ h
  Estimate head;   ///< ∫_0^1 h
  bool holds = false;
};
SumIntegralSandwich sum_integral_sandwich(const LatticeFamily& family, double t, double eps,
                                          const LatticeBudget& budget = {});

/// Checks |H_B - |B| + pi^{-1/2} Per(B) t^{1/2}| <= c_m r^{m-2} t on the grid.
/// mid is the certified left side, upper the envelope, ratio = mid / upper.
VerificationReport single_ball_remainder(int m, double r, std::span<const double> t_grid, double tol = 1e-13);

struct PowerLawPoint {
  double t;
  double value;
  double error;
};

struct PowerLawFit {
  double exponent = 0.0;
  double constant = 0.0;
  double exponent_stderr = 0.0;
};

/// Weighted least squares of log value on log t. Weights are 1/(error/value)^2
/// when every error is positive, uniform otherwise. The slope error is scaled
/// by the residual chi^2/(n-2), so exact data gives zero.
PowerLawFit fit_power_law(std::span<const PowerLawPoint> points);

/// R(t) = |F - pi^{-1/2} Per t^{1/2}| against the envelope of its regime:
///   R5: the explicit c_m Σ r_i^{m-2} t plus the cross bound (rigorous);
///   R4: C t log(1/t) with C fitted at the largest grid t (qualitative);
///   R3: C t^{(m alpha - 1)/(2 alpha)} fitted the same way (qualitative).
/// ratio is R / t for every row.
VerificationReport remainder_envelope(int m, double a, double alpha, std::span<const double> t_grid, double eps,
                                      const LatticeBudget& budget = {});

/// remainder_envelope at alpha = 1/(m-2), m >= 3.
VerificationReport regime4_envelope(int m, double a, std::span<const double> t_grid, double eps,
                                    const LatticeBudget& budget = {});

}  // namespace heatlab
