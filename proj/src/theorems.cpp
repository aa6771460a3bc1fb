#include "heatlab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "heatlab/errors.hpp"
#include "heatlab/estimators.hpp"
#include "heatlab/functionals.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/quadrature.hpp"

namespace heatlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SandwichInputs {
  Estimate quantity;  // H or F
  Estimate functional;  // G_mu or G_nu
};

// H (or F) and the matching functional at one grid time.
SandwichInputs sandwich_inputs(const BallUnion& omega, double t, std::size_t index, const Budget& b, bool loss) {
  if (omega.size() == 1) {
    const double r = omega.ball(0).radius;
    const double tol = b.tol * omega.volume();
    const BallHeat h = ball_heat(omega.dim(), r, t, tol);
    const FunctionalValue g = functionals_ball(omega.dim(), r, t, tol);
    return loss ? SandwichInputs{h.loss, g.g_nu} : SandwichInputs{h.content, g.g_mu};
  }
  const Stream stream{b.seed, static_cast<std::uint32_t>(index)};
  const HeatTally tally = heat_tally(omega, t, b.samples, stream, b.threads);
  const FunctionalValue g = functionals_mc(omega, t, b.samples, stream, b.threads);
  const std::uint64_t inside = tally.same_ball + tally.other_ball;
  if (loss) return {tally_estimate(omega.volume(), tally.samples - inside, tally.samples), g.g_nu};
  return {tally_estimate(omega.volume(), inside, tally.samples), g.g_mu};
}

VerificationReport sandwich(const BallUnion& omega, std::span<const double> t_grid, const Budget& b, bool loss) {
  const LiYauConstants c = liyau_constant(omega.dim());
  const double lo = loss ? c.L1 : c.K1;
  const double hi = loss ? c.L2 : c.K2;
  VerificationReport rep;
  rep.theorem_id = loss ? TheoremId::T2 : TheoremId::T1;
  rep.sigma_mult = b.sigma_mult;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    const SandwichInputs in = sandwich_inputs(omega, t, j, b, loss);
    ReportRow row;
    row.t = t;
    row.label = loss ? "L1 G_nu <= F <= L2 G_nu" : "K1 G_mu <= H <= K2 G_mu";
    row.lower = lo * in.functional.value;
    row.mid = in.quantity.value;
    row.upper = hi * in.functional.value;
    row.sigma_lower = lo * in.functional.error;
    row.sigma_mid = in.quantity.error;
    row.sigma_upper = hi * in.functional.error;
    row.ratio = in.quantity.value / in.functional.value;
    rep.judge(row);
    rep.rows.push_back(row);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "C = %.17g, lower constant = %.17g, upper constant = %.17g; ratio = %s", c.C, lo, hi,
                loss ? "F / G_nu" : "H / G_mu");
  rep.notes.emplace_back(buf);
  rep.notes.emplace_back(omega.size() == 1 ? "single ball: deterministic quadrature"
                                           : "Monte Carlo with shared sample points for both sides");
  rep.finalize();
  return rep;
}

double sum_r2m(const BallUnion& omega) { return omega.radius_power_sum(2.0 * omega.dim()); }

}  // namespace

VerificationReport verify_theorem1(const BallUnion& omega, std::span<const double> t_grid, const Budget& budget) {
  return sandwich(omega, t_grid, budget, false);
}

VerificationReport verify_theorem2(const BallUnion& omega, std::span<const double> t_grid, const Budget& budget) {
  return sandwich(omega, t_grid, budget, true);
}

VerificationReport verify_theorem3i(const BallUnion& window, SeparationGap delta, std::span<const double> t_grid,
                                    const Budget& b) {
  if (!(delta.delta > 0.0)) throw std::invalid_argument("verify_theorem3i: delta must be positive");
  const int m = window.dim();
  const double omega_m = unit_ball_volume(m);
  const double s2m = sum_r2m(window);
  const double r1 = window.max_radius();
  VerificationReport rep;
  rep.theorem_id = TheoremId::T3i;
  rep.sigma_mult = b.sigma_mult;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    const HeatTally tally = heat_tally(window, t, b.samples, Stream{b.seed, static_cast<std::uint32_t>(j)}, b.threads);
    const Estimate H = tally_estimate(window.volume(), tally.same_ball + tally.other_ball, tally.samples);
    ReportRow row;
    row.t = t;
    row.label = "H >= (4 pi t)^{-m/2} e^{-r1^2/t} omega^2 sum r^{2m}";
    row.lower = std::pow(4.0 * std::numbers::pi * t, -0.5 * m) * std::exp(-r1 * r1 / t) * omega_m * omega_m * s2m;
    row.mid = H.value;
    row.sigma_mid = H.error;
    row.upper = kInf;
    row.ratio = row.mid / row.lower;
    rep.judge(row);
    rep.rows.push_back(row);
  }
  // Functional bound at R = delta / 2.
  const double t_star = 0.25 * delta.delta * delta.delta;
  const Estimate g =
      functionals_mc(window, t_star, b.samples, Stream{b.seed, static_cast<std::uint32_t>(t_grid.size())}, b.threads)
          .g_mu;
  ReportRow row;
  row.t = t_star;
  row.label = "G_mu(delta^2/4) <= omega (4/delta)^m sum r^{2m}";
  row.lower = -kInf;
  row.mid = g.value;
  row.sigma_mid = g.error;
  row.upper = omega_m * std::pow(4.0 / delta.delta, m) * s2m;
  row.ratio = row.mid / row.upper;
  rep.judge(row);
  rep.rows.push_back(row);
  rep.notes.emplace_back("last row is the functional bound at t = delta^2/4");
  rep.finalize();
  return rep;
}

VerificationReport verify_decoupling(const BallUnion& window, SeparationGap delta, std::span<const double> t_grid,
                                     const Budget& b) {
  if (!(delta.delta > 0.0)) throw std::invalid_argument("verify_decoupling: delta must be positive");
  const int m = window.dim();
  const double s2m = sum_r2m(window);
  const double omega_m = unit_ball_volume(m);
  VerificationReport rep;
  rep.theorem_id = TheoremId::T3ii;
  rep.sigma_mult = b.sigma_mult;
  rep.t_grid.assign(t_grid.begin(), t_grid.end());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    const HeatTally tally = heat_tally(window, t, b.samples, Stream{b.seed, static_cast<std::uint32_t>(j)}, b.threads);
    const Estimate cross = tally_estimate(window.volume(), tally.other_ball, tally.samples);
    const Estimate H = tally_estimate(window.volume(), tally.same_ball + tally.other_ball, tally.samples);

    // Σ_i H_{B_i} by quadrature, one evaluation per distinct radius.
    std::map<double, double> per_radius;
    double balls = 0.0, balls_err = 0.0;
    for (const Ball& ball : window.balls()) {
      auto [it, fresh] = per_radius.try_emplace(ball.radius, 0.0);
      const double tol = b.tol * ball_volume(m, ball.radius);
      if (fresh) it->second = heat_content_ball(m, ball.radius, t, tol).value;
      balls += it->second;
      balls_err += tol;
    }

    ReportRow row;
    row.t = t;
    row.label = "|H - sum H_i| <= decoupling bound";
    row.lower = 0.0;
    row.mid = cross.value;
    row.sigma_mid = cross.error;
    const double inner = std::numbers::sqrt2 / delta.delta + 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
    row.upper = omega_m * omega_m * std::exp(-delta.delta * delta.delta / (8.0 * t)) * std::pow(inner, m) * s2m;
    row.ratio = row.mid / row.upper;
    rep.judge(row);
    rep.rows.push_back(row);

    char buf[200];
    std::snprintf(buf, sizeof buf, "t=%.6g: raw H_mc - sum H_i = %.6e +- %.2e (quadrature %.1e)", t, H.value - balls,
                  H.error, balls_err);
    rep.notes.emplace_back(buf);
  }
  rep.notes.emplace_back("mid = |Omega| * fraction of jumps into another ball, an unbiased estimate of H - sum H_i");
  rep.finalize();
  return rep;
}

Lemma2Gap lemma2_gap(const std::function<double(double)>& f, const std::function<double(double)>& g, std::uint64_t N,
                     double tol, int probe) {
  if (N < 1) throw std::invalid_argument("lemma2_gap: N must be >= 1");
  if (probe < 1) probe = 1;
  double prev_f = f(1.0), prev_g = g(1.0);
  if (!(prev_f >= 0.0) || !(prev_g >= 0.0)) throw std::invalid_argument("lemma2_gap: f and g must be nonnegative");
  for (std::uint64_t i = 1; i <= N; ++i) {
    for (int p = 1; p <= probe; ++p) {
      const double x = static_cast<double>(i) + static_cast<double>(p) / probe;
      const double fx = f(x), gx = g(x);
      if (fx < prev_f) throw std::invalid_argument("lemma2_gap: f is not increasing");
      if (gx > prev_g) throw std::invalid_argument("lemma2_gap: g is not decreasing");
      if (!(gx >= 0.0)) throw std::invalid_argument("lemma2_gap: g must be nonnegative");
      prev_f = fx;
      prev_g = gx;
    }
  }

  double sum = 0.0, rhs = 0.0;
  for (std::uint64_t i = 1; i <= N; ++i) {
    const double x = static_cast<double>(i);
    sum += f(x) * g(x);
    rhs += f(x + 1.0) * (g(x) - g(x + 1.0));
  }
  const double end = static_cast<double>(N + 1);
  rhs += f(end) * g(end);

  auto fg = [&](double x) { return f(x) * g(x); };
  const auto q = integrate(fg, 1.0, end, tol * std::max(1.0, std::abs(sum)), 0.0,
                           std::max<std::size_t>(4000, 40 * N), static_cast<std::size_t>(N));
  if (!q.converged) throw ConvergenceError("lemma2_gap: integral did not converge", q.value, q.error);

  Lemma2Gap out;
  out.lhs = std::abs(sum - q.value);
  out.rhs = rhs;
  out.quad_error = q.error + 1e-15 * (std::abs(sum) + std::abs(q.value));
  out.holds = out.lhs <= out.rhs + out.quad_error;
  return out;
}

VerificationReport verify_basic_facts(std::span<const std::pair<double, Estimate>> h_grid,
                                      std::optional<std::span<const std::pair<double, Estimate>>> f_grid,
                                      double sigma_mult) {
  auto check_sorted = [](std::span<const std::pair<double, Estimate>> g) {
    for (std::size_t i = 1; i < g.size(); ++i)
      if (!(g[i].first > g[i - 1].first)) throw std::invalid_argument("verify_basic_facts: grid not sorted by t");
  };
  check_sorted(h_grid);
  if (f_grid) check_sorted(*f_grid);

  VerificationReport rep;
  rep.theorem_id = TheoremId::FACTS;
  rep.sigma_mult = sigma_mult;
  for (const auto& [t, e] : h_grid) rep.t_grid.push_back(t);

  auto push = [&](ReportRow row) {
    rep.judge(row);
    rep.rows.push_back(std::move(row));
  };

  for (std::size_t i = 0; i + 1 < h_grid.size(); ++i) {
    const auto& [t0, h0] = h_grid[i];
    const auto& [t1, h1] = h_grid[i + 1];
    push({.t = t1, .lower = h1.value, .mid = h0.value, .upper = kInf, .sigma_lower = h1.error,
          .sigma_mid = h0.error, .ratio = h1.value / h0.value, .label = "H decreasing"});
  }
  for (std::size_t i = 0; i + 2 < h_grid.size(); ++i) {
    const auto& [t1, h1] = h_grid[i];
    const auto& [t2, h2] = h_grid[i + 1];
    const auto& [t3, h3] = h_grid[i + 2];
    if (!(h1.value > 0.0 && h2.value > 0.0 && h3.value > 0.0)) continue;
    const double w1 = (t3 - t2) / (t3 - t1), w3 = (t2 - t1) / (t3 - t1);
    const double chord = w1 * std::log(h1.value) + w3 * std::log(h3.value);
    push({.t = t2, .lower = -kInf, .mid = std::log(h2.value), .upper = chord, .sigma_mid = h2.error / h2.value,
          .sigma_upper = std::hypot(w1 * h1.error / h1.value, w3 * h3.error / h3.value),
          .ratio = std::exp(std::log(h2.value) - chord), .label = "log H convex"});
  }

  if (f_grid) {
    const auto& F = *f_grid;
    for (const auto& [t, e] : F)
      if (std::find(rep.t_grid.begin(), rep.t_grid.end(), t) == rep.t_grid.end()) rep.t_grid.push_back(t);
    std::sort(rep.t_grid.begin(), rep.t_grid.end());
    for (std::size_t i = 0; i + 1 < F.size(); ++i)
      push({.t = F[i + 1].first, .lower = F[i].second.value, .mid = F[i + 1].second.value, .upper = kInf,
            .sigma_lower = F[i].second.error, .sigma_mid = F[i + 1].second.error, .label = "F increasing"});
    for (std::size_t i = 0; i + 2 < F.size(); ++i) {
      const auto& [t1, f1] = F[i];
      const auto& [t2, f2] = F[i + 1];
      const auto& [t3, f3] = F[i + 2];
      const double w1 = (t3 - t2) / (t3 - t1), w3 = (t2 - t1) / (t3 - t1);
      push({.t = t2, .lower = w1 * f1.value + w3 * f3.value, .mid = f2.value, .upper = kInf,
            .sigma_lower = std::hypot(w1 * f1.error, w3 * f3.error), .sigma_mid = f2.error, .label = "F concave"});
    }
    for (std::size_t i = 0; i < F.size(); ++i)
      for (std::size_t j = i; j < F.size(); ++j) {
        const double target = F[i].first + F[j].first;
        for (std::size_t k = j; k < F.size(); ++k)
          if (std::abs(F[k].first - target) <= 1e-12 * target) {
            push({.t = target, .lower = -kInf, .mid = F[k].second.value,
                  .upper = F[i].second.value + F[j].second.value, .sigma_mid = F[k].second.error,
                  .sigma_upper = std::hypot(F[i].second.error, F[j].second.error), .label = "F subadditive"});
          }
      }
  }
  rep.notes.emplace_back("log-convexity tested on consecutive triples; subadditivity where t_i + t_j is a grid time");
  rep.finalize();
  return rep;
}

}  // namespace heatlab
