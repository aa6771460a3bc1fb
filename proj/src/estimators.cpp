#include "heatlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

constexpr std::uint64_t kChunk = 1u << 16;
constexpr std::size_t kMaxPanels = 6000;

// Density of u = |V| / sqrt(t), V ~ N(0, 2t I_m).
struct RadialDensity {
  int m;
  double norm;
  explicit RadialDensity(int dim)
      : m(dim), norm(dim * unit_ball_volume(dim) * std::pow(4.0 * std::numbers::pi, -0.5 * dim)) {}
  double operator()(double u) const { return norm * std::pow(u, m - 1) * std::exp(-0.25 * u * u); }
};

// P(u > U) for the density above.
double radial_tail(int m, double U) { return boost::math::gamma_q(0.5 * m, 0.25 * U * U); }

}  // namespace

BallHeat ball_heat(int m, double r, double t, double tol) {
  if (m < 2) throw std::invalid_argument("ball_heat: m must be >= 2");
  if (!(r > 0.0) || !(t > 0.0) || !(tol > 0.0)) throw std::invalid_argument("ball_heat: need r, t, tol > 0");

  const double volume = ball_volume(m, r);
  const double st = std::sqrt(t);
  const double u_edge = 2.0 * r / st;  // beyond this the translate misses the ball

  // Window [0, u_cut] whose Gaussian tail mass, times |B|, is below tol/16.
  const double tail_p = std::min(0.5, tol / (16.0 * volume));
  const double u_cut = 2.0 * std::sqrt(boost::math::gamma_q_inv(0.5 * m, tail_p));
  const double upper = std::min(u_edge, u_cut);
  const bool window_reaches_edge = u_edge <= u_cut;

  const RadialDensity density(m);
  const bool loss_form = st < r / 50.0;
  const double quad_tol = std::max(0.5 * tol, 1e-15 * volume);

  QuadratureResult q;
  if (loss_form) {
    auto f = [&](double u) { return density(u) * lens_deficit(m, r, st * u); };
    q = integrate(f, 0.0, upper, quad_tol, 0.0, kMaxPanels, 4);
  } else {
    auto f = [&](double u) { return density(u) * (volume - lens_deficit(m, r, st * u)); };
    q = integrate(f, 0.0, upper, quad_tol, 0.0, kMaxPanels, 4);
  }
  if (!q.converged) throw ConvergenceError("ball_heat: quadrature did not converge", q.value, q.error);

  // Mass of |V| beyond the window. For the loss the deficit equals |B| past
  // the edge, so the tail is exact when the window reaches it; otherwise it
  // is only bounded and we take the midpoint.
  const double tail_mass = volume * radial_tail(m, upper);
  double value = q.value;
  double error = q.error;
  if (loss_form) {
    if (window_reaches_edge) {
      value += tail_mass;
    } else {
      value += 0.5 * tail_mass;
      error += 0.5 * tail_mass;
    }
  } else if (!window_reaches_edge) {
    value += 0.5 * tail_mass;
    error += 0.5 * tail_mass;
  }

  BallHeat out;
  if (loss_form) {
    const double F = std::clamp(value, 0.0, volume);
    out.loss = {F, error, EstimateKind::DeterministicTol, tol};
    out.content = {volume - F, error, EstimateKind::DeterministicTol, tol};
  } else {
    const double H = std::clamp(value, 0.0, volume);
    out.content = {H, error, EstimateKind::DeterministicTol, tol};
    out.loss = {volume - H, error, EstimateKind::DeterministicTol, tol};
  }
  return out;
}

Estimate heat_content_ball(int m, double r, double t, double tol) { return ball_heat(m, r, t, tol).content; }

Estimate heat_loss_ball(int m, double r, double t, double tol) { return ball_heat(m, r, t, tol).loss; }

HeatTally heat_tally(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads) {
  if (n < 2) throw std::invalid_argument("heat_tally: need at least 2 samples");
  if (!(t > 0.0)) throw std::invalid_argument("heat_tally: t must be positive");
  const int m = omega.dim();
  const double jump = std::sqrt(2.0 * t);
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<HeatTally> partial(chunks);

  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<double> x(m), y(m);
    HeatTally local;
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min<std::uint64_t>(n, begin + kChunk);
    for (std::uint64_t k = begin; k < end; ++k) {
      CounterRng rng(stream, k);
      const std::size_t from = omega.draw_uniform(rng, x);
      for (int d = 0; d < m; ++d) y[d] = x[d] + jump * rng.normal();
      if (auto to = omega.locate(y)) {
        if (*to == from)
          ++local.same_ball;
        else
          ++local.other_ball;
      }
    }
    local.samples = end - begin;
    partial[c] = local;
  });

  HeatTally total;
  for (const auto& p : partial) {
    total.samples += p.samples;
    total.same_ball += p.same_ball;
    total.other_ball += p.other_ball;
  }
  return total;
}

Estimate tally_estimate(double volume, std::uint64_t hits, std::uint64_t samples) {
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  return {volume * p, volume * std::sqrt(p * (1.0 - p) / n), EstimateKind::MonteCarloSe, n};
}

Estimate heat_content_mc(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads) {
  const auto tally = heat_tally(omega, t, n, stream, threads);
  return tally_estimate(omega.volume(), tally.same_ball + tally.other_ball, tally.samples);
}

Estimate heat_loss_mc(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads) {
  const auto tally = heat_tally(omega, t, n, stream, threads);
  return tally_estimate(omega.volume(), tally.samples - tally.same_ball - tally.other_ball, tally.samples);
}

double polar_angle_weight(int m, double kappa, double rel_tol) {
  auto f = [&](double theta) {
    const double half = std::sin(0.5 * theta);
    const double w = m == 2 ? 1.0 : std::pow(std::sin(theta), m - 2);
    return std::exp(-2.0 * kappa * half * half) * w;
  };
  // Past theta_max the integrand is below exp(-72) of its peak.
  const double theta_max = kappa > 0.0 ? std::min(std::numbers::pi, 12.0 / std::sqrt(kappa)) : std::numbers::pi;
  const auto q = integrate(f, 0.0, theta_max, 0.0, rel_tol, 2000, 2);
  return q.value;
}

Estimate cross_term(int m, const Ball& bi, const Ball& bj, double t, double tol) {
  if (static_cast<int>(bi.center.size()) != m || static_cast<int>(bj.center.size()) != m)
    throw DimensionMismatch("cross_term: ball dimension mismatch");
  if (!(t > 0.0) || !(tol > 0.0)) throw std::invalid_argument("cross_term: need t, tol > 0");
  double d2 = 0.0;
  for (int k = 0; k < m; ++k) d2 += (bi.center[k] - bj.center[k]) * (bi.center[k] - bj.center[k]);
  const double d = std::sqrt(d2);
  const double reach = bi.radius + bj.radius;

  // Surface measure of S^{m-2}: (m - 1) omega_{m-1}; equals 2 for m = 2.
  const double sphere = (m - 1) * unit_ball_volume(m - 1);
  const double prefactor = std::pow(4.0 * std::numbers::pi * t, -0.5 * m) * sphere;

  auto f = [&](double rho) {
    if (rho <= 0.0) return 0.0;
    const double lens = lens_volume(m, bi.radius, bj.radius, rho);
    if (lens == 0.0) return 0.0;
    const double gauss = std::exp(-(d - rho) * (d - rho) / (4.0 * t));
    if (gauss == 0.0) return 0.0;
    return std::pow(rho, m - 1) * lens * gauss * polar_angle_weight(m, d * rho / (2.0 * t), 1e-13);
  };
  const auto q = integrate(f, 0.0, reach, tol / prefactor, 0.0, kMaxPanels, 8);
  if (!q.converged) throw ConvergenceError("cross_term: quadrature did not converge", prefactor * q.value, prefactor * q.error);
  return {prefactor * q.value, prefactor * q.error, EstimateKind::DeterministicTol, tol};
}

}  // namespace heatlab
