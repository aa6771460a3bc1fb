#pragma once

namespace heatlab {

/// Euclidean heat kernel (4 pi t)^{-m/2} exp(-d^2 / 4t) at distance d.
double heat_kernel(int m, double d, double t);

/// Two-sided Gaussian bounds with constant C for the kernel at distance d,
/// using |B(x; sqrt t)| = omega_m t^{m/2}:
///   lower = exp(-C d^2 / t) / (C omega_m t^{m/2})
///   upper = C exp(-d^2 / (C t)) / (omega_m t^{m/2})
struct GaussianBounds {
  double lower;
  double upper;
};
GaussianBounds li_yau_bounds(int m, double C, double d, double t);

/// The constant C shared by the two-sided kernel bound and volume doubling,
/// with the sandwich constants it induces for heat content (K1, K2) and heat
/// loss (L1, L2).
struct LiYauConstants {
  int dim = 0;
  double C = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double L1 = 0.0;
  double L2 = 0.0;
};

/// C_m = max(2^m, 4, (4 pi)^{m/2} / omega_m) for R^m. Requires m >= 2.
LiYauConstants liyau_constant(int m);

/// Constants derived from an arbitrary C >= 2 (evaluated in long double).
LiYauConstants constants_from_C(int m, double C);

/// Upper bound C (r2/r1)^{log C / log 2} on |B(x; r2)| / |B(x; r1)|, r2 >= r1.
double doubling_ratio_bound(double C, double r1, double r2);

/// Constant of the single-ball remainder envelope, 2^{m+2} m^3 omega_m.
double single_ball_remainder_constant(int m);

/// Closed forms for the sandwich constants, templated on the scalar type so
/// they can be re-evaluated in higher precision.
template <class Real>
Real k2_formula(Real C);
template <class Real>
Real l2_formula(Real C);

}  // namespace heatlab

#include <cmath>

namespace heatlab {

template <class Real>
Real k2_formula(Real C) {
  using std::log;
  using std::pow;
  const Real two = 2;
  const Real doubling_exp = log(C) / log(two);
  const Real inner = C * log(two * pow(C, Real(7) / 2 + doubling_exp));
  return two * pow(C, Real(15) / 4) * pow(inner, 3 * doubling_exp / 4);
}

template <class Real>
Real l2_formula(Real C) {
  using std::log;
  using std::pow;
  const Real two = 2;
  const Real doubling_exp = log(C) / log(two);
  const Real inner = C * log(two * pow(C, Real(7) + doubling_exp));
  return 4 * pow(C, Real(15) / 4) * pow(inner, 1 + 3 * doubling_exp / 4);
}

}  // namespace heatlab
