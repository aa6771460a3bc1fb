#include "heatlab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "heatlab/errors.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

constexpr std::uint64_t kChunk = 1u << 14;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace

double mu(const BallUnion& omega, std::span<const double> x, double R) {
  if (static_cast<int>(x.size()) != omega.dim()) throw DimensionMismatch("mu: point dimension mismatch");
  if (!(R > 0.0)) throw std::invalid_argument("mu: R must be positive");
  const int m = omega.dim();
  double total = 0.0;
  omega.for_each_near(x, R, [&](std::size_t i) {
    const auto& b = omega.ball(i);
    double d2 = 0.0;
    for (int k = 0; k < m; ++k) d2 += (x[k] - b.center[k]) * (x[k] - b.center[k]);
    const double reach = R + b.radius;
    if (d2 < reach * reach) total += lens_volume(m, R, b.radius, std::sqrt(d2));
  });
  return std::min(total, ball_volume(m, R));
}

double nu(const BallUnion& omega, std::span<const double> x, double R) {
  return std::max(0.0, ball_volume(omega.dim(), R) - mu(omega, x, R));
}

FunctionalValue functionals_mc(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads) {
  if (!(t > 0.0)) throw std::invalid_argument("functionals_mc: t must be positive");
  if (n < 2) throw std::invalid_argument("functionals_mc: need at least 2 samples");
  const int m = omega.dim();
  const double R = std::sqrt(t);
  const double ball = ball_volume(m, R);
  const std::size_t chunks = static_cast<std::size_t>((n + kChunk - 1) / kChunk);
  std::vector<Moments> partial(chunks);

  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<double> x(m);
    Moments local;
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min<std::uint64_t>(n, begin + kChunk);
    for (std::uint64_t k = begin; k < end; ++k) {
      CounterRng rng(stream, k);
      omega.draw_uniform(rng, x);
      const double ratio = mu(omega, x, R) / ball;
      local.sum += ratio;
      local.sum_sq += ratio * ratio;
    }
    partial[c] = local;
  });

  Moments total;
  for (const auto& p : partial) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const double count = static_cast<double>(n);
  const double mean = total.sum / count;
  const double var = std::max(0.0, (total.sum_sq / count - mean * mean) * count / (count - 1.0));
  const double se = omega.volume() * std::sqrt(var / count);

  FunctionalValue out;
  out.t = t;
  out.g_mu = {omega.volume() * mean, se, EstimateKind::MonteCarloSe, count};
  out.g_nu = {omega.volume() * (1.0 - mean), se, EstimateKind::MonteCarloSe, count};
  return out;
}

Estimate g_mu(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads) {
  return functionals_mc(omega, t, n, stream, threads).g_mu;
}

Estimate g_nu(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads) {
  return functionals_mc(omega, t, n, stream, threads).g_nu;
}

FunctionalValue functionals_ball(int m, double r, double t, double tol) {
  if (!(r > 0.0) || !(t > 0.0) || !(tol > 0.0)) throw std::invalid_argument("functionals_ball: need r, t, tol > 0");
  const double R = std::sqrt(t);
  const double ball = ball_volume(m, R);
  const double shell = m * unit_ball_volume(m);
  const double volume = ball_volume(m, r);
  // G_nu = ∫_B nu / |B(x;R)|: integrate the uncovered part directly so small
  // values keep their relative accuracy.
  auto f = [&](double rho) {
    const double covered = lens_volume(m, R, r, rho) / ball;
    return shell * std::pow(rho, m - 1) * (1.0 - std::min(1.0, covered));
  };
  // B(x; R) lies inside B(0; r) for |x| <= r - R, where nu vanishes. Past
  // that point nu grows like a power 3/2 of the depth; rho = lo + w u^2
  // makes the integrand smooth there.
  const double lo = std::max(0.0, r - R), w = r - lo;
  auto g = [&](double u) { return 2.0 * w * u * f(lo + w * u * u); };
  const auto q = integrate(g, 0.0, 1.0, 0.5 * tol, 0.0, 6000, 8);
  if (!q.converged) throw ConvergenceError("functionals_ball: quadrature did not converge", q.value, q.error);
  FunctionalValue out;
  out.t = t;
  out.g_nu = {q.value, q.error, EstimateKind::DeterministicTol, tol};
  out.g_mu = {volume - q.value, q.error, EstimateKind::DeterministicTol, tol};
  return out;
}

}  // namespace heatlab
