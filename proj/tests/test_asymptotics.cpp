#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>
#include <set>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "heatlab/asymptotics.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/estimators.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/tgrid.hpp"
#include "oracles.hpp"

using namespace heatlab;
using std::numbers::pi;


TEST_SUITE("asymptotics") {

TEST_CASE("lattice enumeration") {
  const auto pts = lattice_points(2, 25);
  REQUIRE(pts.size() == 25);
  CHECK(pts[0] == std::vector<std::int64_t>{0, 0});
  std::set<std::vector<std::int64_t>> seen(pts.begin(), pts.end());
  CHECK(seen.size() == 25);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto norm = [](const auto& p) { return std::max(std::abs(p[0]), std::abs(p[1])); };
    CHECK(norm(pts[i]) <= 2);
    if (i > 0) {
      CHECK(norm(pts[i - 1]) <= norm(pts[i]));
      if (norm(pts[i - 1]) == norm(pts[i])) CHECK(pts[i - 1] < pts[i]);
    }
  }
  CHECK(lattice_points(3, 27).back() == std::vector<std::int64_t>{1, 1, 1});
  const auto w = lattice_window(make_lattice_family(2, 0.25, 0.4), 9);
  CHECK(w.size() == 9);
  CHECK(w.ball(0).radius == 0.25);
  CHECK(w.ball(8).radius == doctest::Approx(0.25 * std::pow(9.0, -0.4)));
  CHECK_THROWS_AS(make_lattice_family(2, 0.3, 0.4), std::invalid_argument);
  CHECK(constant_radius_window(2, 5, 0.25).size() == 121);
}

TEST_CASE("regime classification") {
  auto r = classify_regime(2, 0.4);
  CHECK(r.id == RegimeId::R1);
  CHECK(r.leading_exponent == doctest::Approx(-0.25));
  CHECK(r.constant_kind == LeadingConstant::CAlphaM);
  r = classify_regime(2, 0.7);
  CHECK(r.id == RegimeId::R2);
  CHECK(r.leading_exponent == doctest::Approx(2.0 / 7.0));
  CHECK(classify_regime(2, 1.5).id == RegimeId::R3);
  CHECK(classify_regime(2, 1.5).leading_exponent == 0.5);
  CHECK(classify_regime(3, 1.0).id == RegimeId::R4);
  CHECK(classify_regime(3, 2.0).id == RegimeId::R5);
  CHECK(classify_regime(3, 0.75).id == RegimeId::R3);
  CHECK(classify_regime(4, 0.4).id == RegimeId::R3);
  CHECK(classify_regime(2, 0.5).id == RegimeId::Borderline);
  CHECK(classify_regime(2, 0.25).id == RegimeId::Borderline);
  CHECK(classify_regime(2, 1.0).id == RegimeId::Borderline);
  CHECK(classify_regime(3, 1.0 / 3.0).id == RegimeId::Borderline);
  CHECK(classify_regime(3, 0.5).id == RegimeId::Borderline);
  CHECK_THROWS_AS(classify_regime(2, 0.1), std::domain_error);
  CHECK(summability_criterion(2, 0.4));
  CHECK_FALSE(summability_criterion(2, 0.25));
  CHECK(summability_criterion(3, 0.2));
}

TEST_CASE("regime prefactor") {
  const int m = 2;
  const double al = 0.4, a = 0.25;
  const double want = std::pow(2.0, m - 1 - 1 / al) / pi / al * std::tgamma((2 * m * al - 1) / (2 * al)) *
                      std::pow(a, 1 / al);
  CHECK(regime_prefactor(m, al, a) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("c constant against a Monte Carlo oracle") {
  const auto c = c_constant(2, 0.4, 0.25);
  CHECK(c.value > 0);
  CHECK(c.error <= 1e-11 * c.value);
  const auto mc = oracle::inner(2, 0.4, 4'000'000, 11);
  const double pre = regime_prefactor(2, 0.4, 0.25);
  CHECK(std::abs(c.value - pre * mc.value) <= 3 * pre * mc.se);
  const auto c3 = c_constant(3, 0.25, 0.25);
  const auto mc3 = oracle::inner(3, 0.25, 2'000'000, 12);
  const double pre3 = regime_prefactor(3, 0.25, 0.25);
  CHECK(std::abs(c3.value - pre3 * mc3.value) <= 3 * pre3 * mc3.se);
}

TEST_CASE("c constant near the upper edge") {
  // The B x B integral diverges like 1/(m + beta) as alpha -> 1/m, so
  // (m + beta) c tends to prefactor * m omega^2.
  auto scaled = [](double al) { return (1 / al - 2) * c_constant(2, al, 0.25).value; };
  const double c1 = scaled(0.5 - 1e-3), c2 = scaled(0.5 - 1e-4);
  CHECK(std::abs(c1 - c2) < 0.05 * c2);
  CHECK(c2 == doctest::Approx(regime_prefactor(2, 0.5 - 1e-4, 0.25) * 2 * pi * pi).epsilon(0.01));
  CHECK(c_constant(2, 0.5 - 1e-4, 0.25).value > 5 * c_constant(2, 0.5 - 1e-3, 0.25).value);
  CHECK_THROWS_AS(c_constant(2, 0.5, 0.25), std::domain_error);
  CHECK_THROWS_AS(c_constant(2, 0.25, 0.25), std::domain_error);
}

TEST_CASE("d constant against a Monte Carlo oracle") {
  const auto d = d_constant(2, 0.7, 0.25);
  CHECK(d.value > 0);
  CHECK(d.error <= 1e-11 * d.value);
  const auto mc = oracle::outer(2, 0.7, 4'000'000, 21);
  const double pre = regime_prefactor(2, 0.7, 0.25);
  CHECK(std::abs(d.value - pre * mc.value) <= 3 * pre * mc.se);
  const auto mc3 = oracle::outer(3, 0.4, 2'000'000, 22);
  const double pre3 = regime_prefactor(3, 0.4, 0.25);
  CHECK(std::abs(d_constant(3, 0.4, 0.25).value - pre3 * mc3.value) <= 3 * pre3 * mc3.se);
  CHECK(d_constant(2, 0.7, 0.125).value == doctest::Approx(std::pow(0.5, 1 / 0.7) * d.value).epsilon(1e-10));
  CHECK(d_constant(2, 0.99, 0.25).value > 0);
  CHECK_THROWS_AS(d_constant(2, 1.0, 0.25), std::domain_error);
  CHECK_THROWS_AS(d_constant(2, 0.4, 0.25), std::domain_error);
}

TEST_CASE("unit ball distance moments") {
  const auto& M2 = unit_ball_distance_moments(2, 64);
  CHECK(M2[0] == doctest::Approx(1.0));
  CHECK(M2[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(M2[2] == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  const auto& M3 = unit_ball_distance_moments(3, 8);
  CHECK(M3[1] == doctest::Approx(6.0 / 5.0).epsilon(1e-14));
  for (std::size_t k = 1; k < 64; ++k) {
    CHECK(M2[k] <= std::pow(4.0, k));
    CHECK(M2[k] >= M2[k - 1]);
  }
  CHECK_THROWS(unit_ball_distance_moments(2, 65));
}

TEST_CASE("small-ball expansion against quadrature") {
  for (int m : {2, 3})
    for (double r : {0.01, 0.05, 0.1})
      for (double t : {r * r / 4, r * r, 1.0}) {
        const auto s = small_ball_heat_content(m, r, t);
        const auto q = heat_content_ball(m, r, t, 1e-15 * ball_volume(m, r));
        CHECK(s.value == doctest::Approx(q.value).epsilon(1e-11));
        CHECK(s.error <= 1e-13 * s.value);
      }
}

TEST_CASE("decoupling bound arithmetic") {
  const double want = pi * pi * std::exp(-0.25 / 0.4) * std::pow(2 * std::sqrt(2.0) + 1 / std::sqrt(0.2 * pi), 2) *
                      121 * std::pow(0.25, 4);
  CHECK(decoupling_bound(2, 0.5, 0.05, 121 * std::pow(0.25, 4)) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("lattice series") {
  const auto f = make_lattice_family(2, 0.25, 1.5);
  CHECK(lattice_perimeter(f).value ==
        doctest::Approx(2 * pi * 0.25 * boost::math::zeta(1.5)).epsilon(1e-13));
  CHECK(lattice_volume(f).value == doctest::Approx(pi * 0.0625 * boost::math::zeta(3.0)).epsilon(1e-13));
  CHECK_THROWS_AS(lattice_volume(make_lattice_family(2, 0.25, 0.4)), std::domain_error);
}

TEST_CASE("lattice heat content certificates") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> lt(std::log(1e-4), std::log(1e-3));
  struct Range {
    double lo, hi;
  };
  for (Range rg : {Range{0.27, 0.48}, Range{0.52, 0.98}, Range{1.05, 2.5}}) {
    std::uniform_real_distribution<double> ua(rg.lo, rg.hi);
    for (int k = 0; k < 10; ++k) {
      const auto f = make_lattice_family(2, 0.25, ua(gen));
      const double t = std::exp(lt(gen));
      const double eps = 1e-6;
      const auto coarse = lattice_heat_content(f, t, eps);
      const auto fine = lattice_heat_content(f, t, eps / 10);
      CHECK_MESSAGE(std::abs(coarse.estimate.value - fine.estimate.value) <= eps, "alpha=" << f.alpha << " t=" << t);
      CHECK(coarse.estimate.error <= eps);
      if (f.m * f.alpha > 1) {
        const auto lc = lattice_heat_loss(f, t, eps);
        const auto lf = lattice_heat_loss(f, t, eps / 10);
        CHECK(std::abs(lc.estimate.value - lf.estimate.value) <= eps);
        CHECK(std::abs(lc.estimate.value + coarse.estimate.value - lattice_volume(f).value) <= 2 * eps);
      }
    }
  }
}

TEST_CASE("lattice sum matches a direct ball sum") {
  // Few enough balls that the sum can be written out, with the remainder
  // bounded by the kernel sup estimate.
  const auto f = make_lattice_family(2, 0.25, 2.0);
  const double t = 1e-3;
  const auto L = lattice_heat_content(f, t, 1e-9);
  double direct = 0;
  const int n = 20000;
  for (int i = n; i >= 1; --i) direct += heat_content_ball(2, f.radius(i), t, 1e-14).value;
  const double tail = std::pow(4 * pi * t, -1.0) * pi * pi * std::pow(0.25, 4) *
                      (boost::math::zeta(8.0) - [&] {
                        double s = 0;
                        for (int i = n; i >= 1; --i) s += std::pow(i, -8.0);
                        return s;
                      }());
  CHECK(L.balls.value >= direct - 1e-9);
  CHECK(L.balls.value <= direct + tail + 1e-9);
}

TEST_CASE("regime-1 divergence and large-t decay") {
  const auto f = make_lattice_family(2, 0.25, 0.4);
  const double h3 = lattice_heat_content(f, 1e-3, 1e-5).estimate.value;
  const double h4 = lattice_heat_content(f, 1e-4, 1e-5).estimate.value;
  const double h5 = lattice_heat_content(f, 1e-5, 1e-5).estimate.value;
  CHECK(h3 < h4);
  CHECK(h4 < h5);
  for (double t : {10.0, 100.0}) {
    const auto L = lattice_heat_content(f, t, 5.0);
    const double sup = pi * pi * std::pow(0.25, 4) * boost::math::zeta(1.6) / (4 * pi * t);
    CHECK(L.balls.value <= sup + L.balls.error);
  }
}

TEST_CASE("unattainable tolerances are reported") {
  const auto f = make_lattice_family(2, 0.25, 0.4);
  CHECK_THROWS_AS(lattice_heat_content(f, 0.5, 1e-12), ConvergenceError);
  CHECK_THROWS_AS(lattice_heat_content(f, 1e-5, 1e-6, LatticeBudget{.max_balls = 100}), ConvergenceError);
  CHECK_THROWS_AS(lattice_heat_content(f, -1.0, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(lattice_heat_loss(f, 1e-3, 1e-6), std::domain_error);
}

TEST_CASE("heat loss vanishes with t") {
  const auto f = make_lattice_family(2, 0.25, 1.5);
  const auto F8 = lattice_heat_loss(f, 1e-8, 1e-9);
  const auto F6 = lattice_heat_loss(f, 1e-6, 1e-9);
  const auto F4 = lattice_heat_loss(f, 1e-4, 1e-9);
  CHECK(F8.estimate.value < F6.estimate.value);
  CHECK(F6.estimate.value < F4.estimate.value);
  CHECK(F8.estimate.value < 3 * std::sqrt(1e-8));
  CHECK(F8.estimate.error <= 1e-9);
}

TEST_CASE("sum-integral sandwich") {
  const auto f = make_lattice_family(2, 0.25, 0.4);
  const double va = pi * 0.0625;
  for (double t : {1e-3, 1e-4}) {
    const auto s = sum_integral_sandwich(f, t, 1e-6);
    CHECK(s.holds);
    CHECK(s.lower.value <= s.sum.value);
    CHECK(s.sum.value <= s.upper.value);
    CHECK(s.head.value <= va / (1 - 0.8));
    const auto c = c_constant(2, 0.4, 0.25);
    CHECK(s.upper.value == doctest::Approx(c.value * std::pow(t, -0.25)).epsilon(1e-8));
    const auto L = lattice_heat_content(f, t, 1e-6);
    CHECK(std::abs(L.estimate.value - c.value * std::pow(t, -0.25)) <= va / (1 - 0.8) + L.cross_bound + 1e-6);
  }
  CHECK_THROWS_AS(sum_integral_sandwich(make_lattice_family(2, 0.25, 0.7), 1e-3, 1e-6), std::domain_error);
}

TEST_CASE("power law fit") {
  std::vector<PowerLawPoint> pts;
  for (double t : logspace(1e-6, 1e-2, 9)) pts.push_back({t, 3 * std::sqrt(t), 0.0});
  auto fit = fit_power_law(pts);
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.exponent_stderr < 1e-10);
  pts.clear();
  for (double t : logspace(1e-5, 1e-3, 5)) pts.push_back({t, 0.37 * std::pow(t, -0.25), 1e-6});
  CHECK(fit_power_law(pts).exponent == doctest::Approx(-0.25).epsilon(1e-12));
  pts[2].value *= 1.01;
  CHECK(fit_power_law(pts).exponent_stderr > 0);
  CHECK_THROWS_AS(fit_power_law(std::span(pts).first(3)), std::invalid_argument);
  pts[1].value = -1;
  CHECK_THROWS_AS(fit_power_law(pts), std::invalid_argument);
  std::swap(pts[0], pts[3]);
  pts[1].value = 1;
  CHECK_THROWS_AS(fit_power_law(pts), std::invalid_argument);
}

TEST_CASE("single-ball remainder envelope") {
  const auto grid = logspace(1e-6, 1.0, 25);
  const auto rep = single_ball_remainder(2, 1.0, grid);
  CHECK(rep.passed);
  CHECK(rep.rows.size() == 25);
  CHECK(rep.rows.front().ratio < rep.rows.back().ratio);
  CHECK(rep.rows.front().ratio < 1e-2);
  const auto rep3 = single_ball_remainder(3, 0.5, grid);
  CHECK(rep3.passed);
}

TEST_CASE("remainder envelopes") {
  const auto grid = logspace(1e-6, 1e-3, 4);
  const auto r5 = remainder_envelope(3, 0.25, 2.0, grid, 1e-10);
  CHECK(r5.passed);
  for (const auto& row : r5.rows) CHECK(row.ratio < 1e3);
  const auto r4 = regime4_envelope(3, 0.25, grid, 1e-10);
  CHECK(r4.rows.size() == 4);
  CHECK(r4.theorem_id == TheoremId::T4);
  CHECK_THROWS_AS(regime4_envelope(2, 0.25, grid, 1e-10), std::domain_error);
  CHECK_THROWS_AS(remainder_envelope(2, 0.25, 0.7, grid, 1e-10), std::domain_error);
}

}
