#include "heatlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatlab/geometry.hpp"

namespace heatlab {

double heat_kernel(int m, double d, double t) {
  if (!(t > 0.0) || d < 0.0) throw std::invalid_argument("heat_kernel: need t > 0, d >= 0");
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * m) * std::exp(-d * d / (4.0 * t));
}

GaussianBounds li_yau_bounds(int m, double C, double d, double t) {
  const double vol = unit_ball_volume(m) * std::pow(t, 0.5 * m);
  return {std::exp(-C * d * d / t) / (C * vol), C * std::exp(-d * d / (C * t)) / vol};
}

LiYauConstants constants_from_C(int m, double C) {
  if (!(C >= 2.0)) throw std::invalid_argument("constants_from_C: C must be >= 2");
  using LD = long double;
  const LD c = C;
  const LD small = std::exp(-c) / (c * c);
  LiYauConstants k;
  k.dim = m;
  k.C = C;
  k.K1 = static_cast<double>(small);
  k.L1 = static_cast<double>(small);
  k.K2 = static_cast<double>(k2_formula<LD>(c));
  k.L2 = static_cast<double>(l2_formula<LD>(c));
  return k;
}

LiYauConstants liyau_constant(int m) {
  if (m < 2) throw std::invalid_argument("liyau_constant: m must be >= 2");
  const double gaussian = std::pow(4.0 * std::numbers::pi, 0.5 * m) / unit_ball_volume(m);
  const double C = std::max({std::ldexp(1.0, m), 4.0, gaussian});
  return constants_from_C(m, C);
}

double doubling_ratio_bound(double C, double r1, double r2) {
  if (!(r1 > 0.0) || r2 < r1) throw std::invalid_argument("doubling_ratio_bound: need r2 >= r1 > 0");
  return C * std::pow(r2 / r1, std::log(C) / std::log(2.0));
}

double single_ball_remainder_constant(int m) {
  return std::ldexp(1.0, m + 2) * m * m * m * unit_ball_volume(m);
}

}  // namespace heatlab
