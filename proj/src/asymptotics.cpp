#include "heatlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/estimators.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/quadrature.hpp"
#include "heatlab/series.hpp"

namespace heatlab {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
constexpr std::size_t kMoments = 64;
constexpr std::size_t kBallChunk = 2048;

bool near(double x, double target) { return std::abs(x - target) <= 1e-12 * std::abs(target); }

// Appends shell n of Z^d (points with |z|_inf == n) in lexicographic order.
void append_shell(int d, std::int64_t n, std::vector<std::int64_t>& prefix,
                  std::vector<std::vector<std::int64_t>>& out, std::size_t count, bool full_cube) {
  if (out.size() >= count) return;
  if (d == 0) {
    if (full_cube) out.push_back(prefix);
    return;
  }
  for (std::int64_t z = -n; z <= n && out.size() < count; ++z) {
    const bool on_face = full_cube || std::abs(z) == n;
    if (!on_face && d == 1) continue;
    prefix.push_back(z);
    append_shell(d - 1, n, prefix, out, count, on_face);
    prefix.pop_back();
  }
}

// First index N with r_{N+1}^2 <= 4t, so every i > N has r_i^2 / 4t <= 1.
std::uint64_t switch_index(const LatticeFamily& f, double t) {
  const double x = std::pow(f.a / (2.0 * std::sqrt(t)), 1.0 / f.alpha);
  if (x <= 1.0) return 0;
  auto n = static_cast<std::uint64_t>(std::ceil(x)) - 1;
  while (f.radius(n + 1) * f.radius(n + 1) > 4.0 * t) ++n;
  return n;
}

struct SeriesPart {
  double value = 0.0;
  double error = 0.0;
};

// Σ_{i>N} H_{B_i}(t) through the small-ball expansion, term k weighted by the
// zeta tail S((2m+2k) alpha, N).
SeriesPart tail_heat_content(const LatticeFamily& f, double t, std::uint64_t N, double target) {
  const int m = f.m;
  const auto& M = unit_ball_distance_moments(m, kMoments);
  const double omega = unit_ball_volume(m);
  const double kappa = std::pow(4.0 * std::numbers::pi * t, -0.5 * m) * omega * omega;
  SeriesPart out;
  CompensatedSum sum;
  double coef = kappa * std::pow(f.a, 2 * m);  // kappa a^{2m+2k} / (k! (4t)^k)
  const double step = f.a * f.a / (4.0 * t);
  for (std::size_t k = 0; k + 1 < kMoments; ++k) {
    const double s = (2.0 * m + 2.0 * k) * f.alpha;
    const Estimate S = power_tail_sum(s, N);
    const double term = coef * M[k] * S.value;
    sum.add((k % 2 == 0) ? term : -term);
    out.error += coef * M[k] * S.error;
    const double next_coef = coef * step / static_cast<double>(k + 1);
    const Estimate Sn = power_tail_sum((2.0 * m + 2.0 * (k + 1)) * f.alpha, N);
    const double remainder = next_coef * M[k + 1] * (Sn.value + Sn.error);
    coef = next_coef;
    if (k >= 4 && remainder <= target) {
      out.error += remainder;
      out.value = sum.value();
      return out;
    }
  }
  throw ConvergenceError("lattice tail series did not converge", sum.value(), out.error);
}

struct HeadPart {
  double value = 0.0;
  double error = 0.0;
};

// Σ_{i=1}^{N} of the chosen single-ball quantity, each to tolerance tol_each.
template <class Pick>
HeadPart explicit_balls(const LatticeFamily& f, double t, std::uint64_t N, double tol_each, unsigned threads,
                        Pick pick) {
  const std::size_t chunks = (N + kBallChunk - 1) / kBallChunk;
  std::vector<HeadPart> slots(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    CompensatedSum v;
    double e = 0.0;
    const std::uint64_t lo = c * kBallChunk + 1;
    const std::uint64_t hi = std::min<std::uint64_t>(N, (c + 1) * kBallChunk);
    // Smallest balls first.
    for (std::uint64_t i = hi; i >= lo; --i) {
      const BallHeat b = ball_heat(f.m, f.radius(i), t, tol_each);
      const Estimate& q = pick(b);
      v.add(q.value);
      e += q.error;
    }
    slots[c] = {v.value(), e};
  });
  CompensatedSum total;
  double err = 0.0;
  for (std::size_t c = chunks; c-- > 0;) {
    total.add(slots[c].value);
    err += slots[c].error;
  }
  return {total.value(), err};
}

double cross_bound_for(const LatticeFamily& f, double t) {
  const Estimate r2m = lattice_radius_power_sum(f, 2.0 * f.m);
  return decoupling_bound(f.m, f.delta(), t, r2m.value + r2m.error);
}

void check_lattice_inputs(double t, double eps) {
  if (!(t > 0.0) || !(eps > 0.0)) throw std::invalid_argument("lattice sum: need t > 0 and eps > 0");
}

}  // namespace

double LatticeFamily::radius(std::uint64_t i) const { return a * std::pow(static_cast<double>(i), -alpha); }

LatticeFamily make_lattice_family(int m, double a, double alpha) {
  if (m < 2) throw std::invalid_argument("lattice family: m must be >= 2");
  if (!(a > 0.0) || a > 0.25) throw std::invalid_argument("lattice family: need 0 < a <= 1/4");
  if (!(alpha > 0.0)) throw std::invalid_argument("lattice family: alpha must be positive");
  return {m, a, alpha};
}

std::vector<std::vector<std::int64_t>> lattice_points(int m, std::size_t count) {
  if (m < 1) throw std::invalid_argument("lattice_points: m must be >= 1");
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(count);
  std::vector<std::int64_t> prefix;
  if (count > 0) out.push_back(std::vector<std::int64_t>(m, 0));
  for (std::int64_t n = 1; out.size() < count; ++n) append_shell(m, n, prefix, out, count, false);
  return out;
}

BallUnion lattice_window(const LatticeFamily& family, std::size_t count) {
  const auto pts = lattice_points(family.m, count);
  std::vector<Ball> balls;
  balls.reserve(count);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point c(pts[i].begin(), pts[i].end());
    balls.push_back({std::move(c), family.radius(i + 1)});
  }
  return BallUnion(family.m, std::move(balls), "lattice window");
}

BallUnion constant_radius_window(int m, int half_width, double radius) {
  if (half_width < 0) throw std::invalid_argument("constant_radius_window: negative half width");
  const std::size_t side = 2 * static_cast<std::size_t>(half_width) + 1;
  std::size_t count = 1;
  for (int d = 0; d < m; ++d) count *= side;
  const auto pts = lattice_points(m, count);
  std::vector<Ball> balls;
  balls.reserve(count);
  for (const auto& p : pts) balls.push_back({Point(p.begin(), p.end()), radius});
  return BallUnion(m, std::move(balls), "constant-radius window");
}

std::string_view to_string(RegimeId id) {
  switch (id) {
    case RegimeId::R1: return "R1";
    case RegimeId::R2: return "R2";
    case RegimeId::R3: return "R3";
    case RegimeId::R4: return "R4";
    case RegimeId::R5: return "R5";
    case RegimeId::Borderline: return "BORDERLINE";
  }
  return "?";
}

Regime classify_regime(int m, double alpha) {
  if (m < 2) throw std::invalid_argument("classify_regime: m must be >= 2");
  const double lo = 1.0 / (2.0 * m);
  const double exponent = (m * alpha - 1.0) / (2.0 * alpha);
  if (near(alpha, lo)) return {RegimeId::Borderline, 0.0, LeadingConstant::None, "alpha = 1/(2m): heat content infinite"};
  if (alpha < lo) throw std::domain_error("classify_regime: alpha < 1/(2m), heat content is infinite");
  if (near(alpha, 1.0 / m))
    return {RegimeId::Borderline, 0.0, LeadingConstant::None, "alpha = 1/m: logarithmic corrections, not analysed"};
  if (alpha < 1.0 / m) return {RegimeId::R1, exponent, LeadingConstant::CAlphaM, "infinite measure"};
  if (near(alpha, 1.0 / (m - 1)))
    return {RegimeId::Borderline, 0.0, LeadingConstant::None, "alpha = 1/(m-1): logarithmic corrections, not analysed"};
  if (alpha < 1.0 / (m - 1)) return {RegimeId::R2, exponent, LeadingConstant::DAlphaM, "infinite perimeter"};
  if (m == 2) return {RegimeId::R3, 0.5, LeadingConstant::Perimeter, "finite perimeter"};
  const double r4 = 1.0 / (m - 2);
  if (near(alpha, r4)) return {RegimeId::R4, 0.5, LeadingConstant::Perimeter, "finite perimeter, t log(1/t) remainder"};
  if (alpha < r4) return {RegimeId::R3, 0.5, LeadingConstant::Perimeter, "finite perimeter"};
  return {RegimeId::R5, 0.5, LeadingConstant::Perimeter, "finite perimeter, O(t) remainder"};
}

bool summability_criterion(int m, double alpha) { return 2.0 * m * alpha > 1.0; }

double regime_prefactor(int m, double alpha, double a) {
  return std::pow(2.0, m - 1.0 - 1.0 / alpha) * std::pow(std::numbers::pi, -0.5 * m) / alpha *
         std::tgamma((2.0 * m * alpha - 1.0) / (2.0 * alpha)) * std::pow(a, 1.0 / alpha);
}

Estimate c_constant(int m, double alpha, double a, double tol) {
  if (!(alpha > 1.0 / (2.0 * m) && alpha < 1.0 / m))
    throw std::domain_error("c_constant: requires 1/(2m) < alpha < 1/m");
  const double beta = (1.0 - 2.0 * m * alpha) / alpha;
  const double q = m + beta;
  const double omega = unit_ball_volume(m);
  // s = u^{1/q} turns s^{m-1+beta} ds into du / q.
  auto f = [&](double u) { return lens_volume(m, 1.0, 1.0, std::pow(u, 1.0 / q)); };
  const auto r = integrate(f, 0.0, std::pow(2.0, q), 0.0, tol, 20000, 8);
  if (!r.converged) throw ConvergenceError("c_constant: quadrature did not converge", r.value, r.error);
  const double scale = regime_prefactor(m, alpha, a) * m * omega / q;
  return {scale * r.value, scale * r.error, EstimateKind::DeterministicTol, tol};
}

Estimate d_constant(int m, double alpha, double a, double tol) {
  if (!(alpha > 1.0 / m && alpha < 1.0 / (m - 1)))
    throw std::domain_error("d_constant: requires 1/m < alpha < 1/(m-1)");
  const double beta = (1.0 - 2.0 * m * alpha) / alpha;
  const double q = m + beta + 1.0;
  const double omega = unit_ball_volume(m);
  // s = u^{1/q} turns s^{m-1+beta} deficit(s) ds into (deficit(s)/s) du / q.
  auto f = [&](double u) {
    const double s = std::pow(u, 1.0 / q);
    // deficit(s) / s -> omega_{m-1} as s -> 0.
    if (s < 1e-150) return unit_ball_volume(m - 1);
    return lens_deficit(m, 1.0, s) / s;
  };
  const auto r = integrate(f, 0.0, std::pow(2.0, q), 0.0, tol, 20000, 8);
  if (!r.converged) throw ConvergenceError("d_constant: quadrature did not converge", r.value, r.error);
  const double outer = m * omega * omega * std::pow(2.0, m + beta) / (-(m + beta));
  const double P = regime_prefactor(m, alpha, a);
  const double value = P * (m * omega / q * r.value + outer);
  return {value, P * m * omega / q * r.error, EstimateKind::DeterministicTol, tol};
}

const std::vector<double>& unit_ball_distance_moments(int m, std::size_t count) {
  static std::mutex mutex;
  static std::map<int, std::vector<double>> cache;
  if (count > kMoments) throw std::invalid_argument("unit_ball_distance_moments: too many moments requested");
  std::lock_guard lock(mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  const double omega = unit_ball_volume(m);
  std::vector<double> M(kMoments);
  for (std::size_t k = 0; k < kMoments; ++k) {
    auto f = [&](double s) { return std::pow(s, m - 1.0 + 2.0 * k) * lens_volume(m, 1.0, 1.0, s); };
    const auto r = integrate(f, 0.0, 2.0, 0.0, 1e-15, 4000, 4);
    M[k] = m * r.value / omega;
  }
  M[0] = 1.0;
  return cache.emplace(m, std::move(M)).first->second;
}

Estimate small_ball_heat_content(int m, double r, double t) {
  const auto& M = unit_ball_distance_moments(m, kMoments);
  const double omega = unit_ball_volume(m);
  const double kappa = std::pow(4.0 * std::numbers::pi * t, -0.5 * m) * omega * omega * std::pow(r, 2 * m);
  const double x = r * r / (4.0 * t);
  CompensatedSum sum;
  double coef = 1.0;  // x^k / k!
  for (std::size_t k = 0; k + 1 < kMoments; ++k) {
    sum.add((k % 2 == 0 ? 1.0 : -1.0) * coef * M[k]);
    coef *= x / static_cast<double>(k + 1);
    const double remainder = coef * M[k + 1];
    if (remainder <= 1e-17 * std::abs(sum.value())) return {kappa * sum.value(), kappa * remainder, EstimateKind::DeterministicTol, 0.0};
  }
  throw ConvergenceError("small_ball_heat_content: r^2/t too large for the expansion", kappa * sum.value(),
                         std::numeric_limits<double>::infinity());
}

double decoupling_bound(int m, double delta, double t, double sum_r2m) {
  const double omega = unit_ball_volume(m);
  const double inner = std::numbers::sqrt2 / delta + 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  return omega * omega * std::exp(-delta * delta / (8.0 * t)) * std::pow(inner, m) * sum_r2m;
}

Estimate lattice_radius_power_sum(const LatticeFamily& f, double p) {
  if (!(p * f.alpha > 1.0)) throw std::domain_error("lattice_radius_power_sum: series diverges");
  const Estimate z = zeta(p * f.alpha);
  const double ap = std::pow(f.a, p);
  return {ap * z.value, ap * z.error, EstimateKind::DeterministicTol, 0.0};
}

Estimate lattice_volume(const LatticeFamily& f) {
  const Estimate s = lattice_radius_power_sum(f, f.m);
  const double omega = unit_ball_volume(f.m);
  return {omega * s.value, omega * s.error, EstimateKind::DeterministicTol, 0.0};
}

Estimate lattice_perimeter(const LatticeFamily& f) {
  const Estimate s = lattice_radius_power_sum(f, f.m - 1.0);
  const double c = f.m * unit_ball_volume(f.m);
  return {c * s.value, c * s.error, EstimateKind::DeterministicTol, 0.0};
}

LatticeSum lattice_heat_content(const LatticeFamily& f, double t, double eps, const LatticeBudget& budget) {
  check_lattice_inputs(t, eps);
  if (!summability_criterion(f.m, f.alpha)) throw std::domain_error("lattice_heat_content: alpha <= 1/(2m)");
  const std::uint64_t N = switch_index(f, t);
  const double X = cross_bound_for(f, t);
  if (N > budget.max_balls)
    throw ConvergenceError("lattice_heat_content: ball budget exceeded", std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity());

  const SeriesPart tail = tail_heat_content(f, t, N, eps / 16.0);
  const HeadPart head = N == 0 ? HeadPart{} : explicit_balls(f, t, N, eps / (4.0 * N), budget.threads,
                                                             [](const BallHeat& b) -> const Estimate& { return b.content; });
  LatticeSum out;
  out.explicit_balls = N;
  out.quadrature_error = head.error;
  out.tail_error = tail.error;
  out.cross_bound = X;
  out.balls = {head.value + tail.value, head.error + tail.error, EstimateKind::DeterministicTol, eps};
  out.estimate = {out.balls.value + 0.5 * X, out.balls.error + 0.5 * X, EstimateKind::DeterministicTol, eps};
  if (out.estimate.error > eps)
    throw ConvergenceError("lattice_heat_content: requested eps not attainable", out.estimate.value,
                           out.estimate.error);
  return out;
}

LatticeSum lattice_heat_loss(const LatticeFamily& f, double t, double eps, const LatticeBudget& budget) {
  check_lattice_inputs(t, eps);
  if (!(f.m * f.alpha > 1.0)) throw std::domain_error("lattice_heat_loss: requires alpha > 1/m (finite measure)");
  const std::uint64_t N = switch_index(f, t);
  const double X = cross_bound_for(f, t);
  if (N > budget.max_balls)
    throw ConvergenceError("lattice_heat_loss: ball budget exceeded", std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity());

  // Σ_{i>N} F_i = omega a^m S(m alpha, N) - Σ_{i>N} H_i.
  const SeriesPart tail_h = tail_heat_content(f, t, N, eps / 16.0);
  const Estimate S = power_tail_sum(f.m * f.alpha, N);
  const double va = unit_ball_volume(f.m) * std::pow(f.a, f.m);
  const double tail_value = va * S.value - tail_h.value;
  const double tail_error = va * S.error + tail_h.error;

  const HeadPart head = N == 0 ? HeadPart{} : explicit_balls(f, t, N, eps / (4.0 * N), budget.threads,
                                                             [](const BallHeat& b) -> const Estimate& { return b.loss; });
  LatticeSum out;
  out.explicit_balls = N;
  out.quadrature_error = head.error;
  out.tail_error = tail_error;
  out.cross_bound = X;
  out.balls = {head.value + tail_value, head.error + tail_error, EstimateKind::DeterministicTol, eps};
  out.estimate = {out.balls.value - 0.5 * X, out.balls.error + 0.5 * X, EstimateKind::DeterministicTol, eps};
  if (out.estimate.error > eps)
    throw ConvergenceError("lattice_heat_loss: requested eps not attainable", out.estimate.value, out.estimate.error);
  return out;
}

SumIntegralSandwich sum_integral_sandwich(const LatticeFamily& f, double t, double eps, const LatticeBudget& budget) {
  check_lattice_inputs(t, eps);
  const int m = f.m;
  const double ma = m * f.alpha;
  if (!(2.0 * ma > 1.0 && ma < 1.0)) throw std::domain_error("sum_integral_sandwich: requires 1/(2m) < alpha < 1/m");
  const double va = unit_ball_volume(m) * std::pow(f.a, m);
  const double rel = 1e-10;

  // ∫_0^1 h with x = u^{1/(1 - m alpha)}; h(x) x^{m alpha} stays below omega a^m.
  double head_eval_err = 0.0;
  auto head_f = [&](double u) {
    const double x = std::pow(u, 1.0 / (1.0 - ma));
    const double r = f.a * std::pow(x, -f.alpha);
    const BallHeat b = ball_heat(m, r, t, rel * ball_volume(m, r));
    const double w = std::pow(x, ma) / (1.0 - ma);
    head_eval_err = std::max(head_eval_err, b.content.error * w);
    return b.content.value * w;
  };
  const auto head_q = integrate(head_f, 0.0, 1.0, 0.0, rel, 2000, 4);
  if (!head_q.converged) throw ConvergenceError("sandwich: head integral", head_q.value, head_q.error);
  const Estimate head{head_q.value, head_q.error + head_eval_err, EstimateKind::DeterministicTol, rel};

  // ∫_1^X h over log x, X where r = 2 sqrt t.
  const double X = std::max(1.0, std::pow(f.a / (2.0 * std::sqrt(t)), 1.0 / f.alpha));
  double mid_eval_err = 0.0;
  auto mid_f = [&](double y) {
    const double x = std::exp(y);
    const double r = f.radius(1) * std::pow(x, -f.alpha);
    const BallHeat b = ball_heat(m, r, t, rel * ball_volume(m, r));
    mid_eval_err = std::max(mid_eval_err, b.content.error * x);
    return b.content.value * x;
  };
  QuadratureResult mid_q;
  if (X > 1.0) {
    mid_q = integrate(mid_f, 0.0, std::log(X), 0.0, rel, 4000, 16);
    if (!mid_q.converged) throw ConvergenceError("sandwich: middle integral", mid_q.value, mid_q.error);
  }
  const double mid_err = mid_q.error + mid_eval_err * std::log(X);

  // ∫_X^∞ h from the small-ball expansion, integrated term by term.
  const auto& M = unit_ball_distance_moments(m, kMoments);
  const double omega = unit_ball_volume(m);
  const double kappa = std::pow(4.0 * std::numbers::pi * t, -0.5 * m) * omega * omega;
  CompensatedSum tail;
  double tail_err = 0.0;
  double coef = kappa * std::pow(f.a, 2 * m);
  const double step = f.a * f.a / (4.0 * t);
  bool done = false;
  for (std::size_t k = 0; k + 1 < kMoments; ++k) {
    const double p = (2.0 * m + 2.0 * k) * f.alpha;
    const double term = coef * M[k] * std::pow(X, 1.0 - p) / (p - 1.0);
    tail.add(k % 2 == 0 ? term : -term);
    coef *= step / static_cast<double>(k + 1);
    const double pn = (2.0 * m + 2.0 * (k + 1)) * f.alpha;
    const double remainder = coef * M[k + 1] * std::pow(X, 1.0 - pn) / (pn - 1.0);
    if (k >= 4 && remainder <= 1e-16 * std::abs(tail.value())) {
      tail_err = remainder;
      done = true;
      break;
    }
  }
  if (!done) throw ConvergenceError("sandwich: tail expansion", tail.value(), std::numeric_limits<double>::infinity());

  SumIntegralSandwich out;
  out.t = t;
  out.head = head;
  const double lower = mid_q.value + tail.value();
  const double lower_err = mid_err + tail_err;
  out.lower = {lower, lower_err, EstimateKind::DeterministicTol, rel};
  out.upper = {lower + head.value, lower_err + head.error, EstimateKind::DeterministicTol, rel};
  out.sum = lattice_heat_content(f, t, eps, budget).balls;
  out.holds = out.sum.value + out.sum.error >= out.lower.value - out.lower.error &&
              out.sum.value - out.sum.error <= out.upper.value + out.upper.error &&
              out.head.value <= va / (1.0 - ma) + out.head.error;
  return out;
}

VerificationReport single_ball_remainder(int m, double r, std::span<const double> t_grid, double tol) {
  VerificationReport rep;
  rep.theorem_id = TheoremId::T4;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  const double per = ball_perimeter(m, r);
  const double cm = single_ball_remainder_constant(m);
  for (double t : t_grid) {
    const Estimate F = heat_loss_ball(m, r, t, tol);
    ReportRow row;
    row.t = t;
    row.label = "single-ball remainder";
    row.lower = 0.0;
    row.mid = std::abs(kInvSqrtPi * per * std::sqrt(t) - F.value);
    row.sigma_mid = F.error;
    row.upper = cm * std::pow(r, m - 2) * t;
    row.ratio = row.mid / row.upper;
    // Certified comparison, no statistical slack.
    row.pass = row.mid + row.sigma_mid <= row.upper;
    rep.rows.push_back(row);
  }
  rep.notes.push_back("envelope c_m r^{m-2} t with c_m = 2^{m+2} m^3 omega_m; ratio = lhs / envelope");
  rep.finalize();
  return rep;
}

PowerLawFit fit_power_law(std::span<const PowerLawPoint> points) {
  const std::size_t n = points.size();
  if (n < 4) throw std::invalid_argument("fit_power_law: need at least 4 points");
  bool weighted = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(points[i].value > 0.0) || !(points[i].t > 0.0))
      throw std::invalid_argument("fit_power_law: values and times must be positive");
    if (i > 0 && !(points[i].t > points[i - 1].t)) throw std::invalid_argument("fit_power_law: t must be sorted");
    if (!(points[i].error > 0.0)) weighted = false;
  }
  double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
  std::vector<double> w(n), x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(points[i].t);
    y[i] = std::log(points[i].value);
    const double rel = points[i].error / points[i].value;
    w[i] = weighted ? 1.0 / (rel * rel) : 1.0;
    S += w[i];
    Sx += w[i] * x[i];
    Sy += w[i] * y[i];
    Sxx += w[i] * x[i] * x[i];
    Sxy += w[i] * x[i] * y[i];
  }
  const double D = S * Sxx - Sx * Sx;
  const double slope = (S * Sxy - Sx * Sy) / D;
  const double intercept = (Sxx * Sy - Sx * Sxy) / D;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double res = y[i] - intercept - slope * x[i];
    chi2 += w[i] * res * res;
  }
  const double s2 = chi2 / static_cast<double>(n - 2);
  return {slope, std::exp(intercept), std::sqrt(s2 * S / D)};
}

VerificationReport remainder_envelope(int m, double a, double alpha, std::span<const double> t_grid, double eps,
                                      const LatticeBudget& budget) {
  const LatticeFamily f = make_lattice_family(m, a, alpha);
  const Regime reg = classify_regime(m, alpha);
  if (reg.id != RegimeId::R3 && reg.id != RegimeId::R4 && reg.id != RegimeId::R5)
    throw std::domain_error("remainder_envelope: requires a finite-perimeter regime");
  if (t_grid.empty()) throw std::invalid_argument("remainder_envelope: empty grid");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw std::invalid_argument("remainder_envelope: unsorted grid");

  const Estimate per = lattice_perimeter(f);
  VerificationReport rep;
  rep.theorem_id = TheoremId::T4;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  for (double t : t_grid) {
    const LatticeSum F = lattice_heat_loss(f, t, eps, budget);
    ReportRow row;
    row.t = t;
    row.label = std::string(to_string(reg.id)) + " remainder";
    row.mid = std::abs(F.estimate.value - kInvSqrtPi * per.value * std::sqrt(t));
    row.sigma_mid = F.estimate.error + kInvSqrtPi * per.error * std::sqrt(t);
    row.lower = 0.0;
    row.ratio = row.mid / t;
    rep.rows.push_back(row);
  }

  if (reg.id == RegimeId::R5) {
    const Estimate s = lattice_radius_power_sum(f, m - 2.0);
    const double cm = single_ball_remainder_constant(m);
    for (auto& row : rep.rows)
      row.upper = cm * (s.value + s.error) * row.t + cross_bound_for(f, row.t);
    rep.notes.push_back("R5 envelope c_m sum r_i^{m-2} t plus the decoupling bound; rigorous");
  } else {
    auto shape = [&](double t) {
      return reg.id == RegimeId::R4 ? t * std::log(1.0 / t) : std::pow(t, (m * alpha - 1.0) / (2.0 * alpha));
    };
    const auto& last = rep.rows.back();
    const double C = last.mid / shape(last.t);
    for (auto& row : rep.rows) row.upper = C * shape(row.t);
    rep.notes.push_back(std::string(reg.id == RegimeId::R4 ? "R4 envelope C t log(1/t)" : "R3 envelope C t^{(m alpha-1)/(2 alpha)}") +
                        " with C fitted at the largest t; qualitative, the constant is not known");
  }
  for (auto& row : rep.rows) rep.judge(row);
  rep.finalize();
  return rep;
}

VerificationReport regime4_envelope(int m, double a, std::span<const double> t_grid, double eps,
                                    const LatticeBudget& budget) {
  if (m < 3) throw std::domain_error("regime4_envelope: requires m >= 3");
  return remainder_envelope(m, a, 1.0 / (m - 2), t_grid, eps, budget);
}

}  // namespace heatlab
