#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatlab/errors.hpp"
#include "heatlab/geometry.hpp"

using namespace heatlab;
using std::numbers::pi;

namespace {

// Planar lens of two disks at distance s, elementary closed form.
double planar_lens(double r1, double r2, double s) {
  if (s >= r1 + r2) return 0.0;
  if (s <= std::abs(r1 - r2)) return pi * std::min(r1, r2) * std::min(r1, r2);
  const double a1 = std::acos((s * s + r1 * r1 - r2 * r2) / (2 * s * r1));
  const double a2 = std::acos((s * s + r2 * r2 - r1 * r1) / (2 * s * r2));
  const double k = std::sqrt((-s + r1 + r2) * (s + r1 - r2) * (s - r1 + r2) * (s + r1 + r2));
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k;
}

// Lens of two balls in R^3.
double spatial_lens(double r1, double r2, double s) {
  if (s >= r1 + r2) return 0.0;
  if (s <= std::abs(r1 - r2)) return 4.0 / 3.0 * pi * std::pow(std::min(r1, r2), 3);
  const double g = r1 + r2 - s;
  return pi * g * g * (s * s + 2 * s * r2 - 3 * r2 * r2 + 2 * s * r1 + 6 * r1 * r2 - 3 * r1 * r1) / (12 * s);
}

// Hit-count estimate of the lens with the standard library generator.
std::pair<double, double> lens_mc(int m, double r1, double r2, double s, int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double r = std::min(r1, r2);
  // Sample the cube around the smaller ball.
  const double cx = r1 <= r2 ? 0.0 : s;
  std::int64_t hits = 0;
  for (int k = 0; k < n; ++k) {
    double p[3], d0 = 0, d1 = 0;
    for (int j = 0; j < m; ++j) {
      p[j] = u(gen) * r + (j == 0 ? cx : 0.0);
      d0 += p[j] * p[j];
      const double q = p[j] - (j == 0 ? s : 0.0);
      d1 += q * q;
    }
    if (d0 < r1 * r1 && d1 < r2 * r2) ++hits;
  }
  const double box = std::pow(2 * r, m);
  const double f = static_cast<double>(hits) / n;
  return {box * f, box * std::sqrt(f * (1 - f) / n)};
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("ball volume and perimeter") {
  CHECK(ball_volume(2, 1.0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(ball_volume(3, 1.0) == doctest::Approx(4 * pi / 3).epsilon(1e-15));
  CHECK(ball_volume(2, 0.25) == doctest::Approx(pi / 16).epsilon(1e-15));
  CHECK(ball_perimeter(2, 1.0) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(ball_perimeter(3, 1.0) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(ball_perimeter(2, 0.25) == doctest::Approx(pi / 2).epsilon(1e-15));
  for (int m = 2; m <= 8; ++m)
    for (double R : {0.1, 0.37, 1.0, 5.5}) CHECK(ball_volume(m, 2 * R) / ball_volume(m, R) == doctest::Approx(std::pow(2.0, m)).epsilon(1e-14));
}

TEST_CASE("planar lens oracle") {
  CHECK(lens_volume(2, 1, 1, 0) == doctest::Approx(pi).epsilon(1e-15));
  CHECK(lens_volume(2, 1, 1, 2.5) == 0.0);
  CHECK(planar_lens(1, 1, 1) == doctest::Approx(2 * pi / 3 - std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(lens_volume(2, 1, 1, 1) == doctest::Approx(1.2283696986087567).epsilon(1e-13));
  const auto [v, se] = lens_mc(2, 1, 1, 1, 10'000'000, 1);
  CHECK(std::abs(v - lens_volume(2, 1, 1, 1)) < 4 * se);

  for (double r1 : {0.3, 1.0, 2.0})
    for (double r2 : {0.5, 1.0, 1.7})
      for (int k = 0; k <= 40; ++k) {
        const double s = (r1 + r2) * k / 40.0;
        CHECK(lens_volume(2, r1, r2, s) == doctest::Approx(planar_lens(r1, r2, s)).epsilon(1e-11).scale(1e-14));
        CHECK(lens_volume(3, r1, r2, s) == doctest::Approx(spatial_lens(r1, r2, s)).epsilon(1e-11).scale(1e-14));
      }
}

TEST_CASE("lens symmetry, monotonicity and range") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.05, 2.0);
  for (int k = 0; k < 200; ++k) {
    const int m = 2 + k % 4;
    const double r1 = u(gen), r2 = u(gen);
    double prev = lens_volume(m, r1, r2, 0.0);
    for (int j = 1; j <= 50; ++j) {
      const double s = (r1 + r2) * j / 50.0;
      const double v = lens_volume(m, r1, r2, s);
      CHECK(v == lens_volume(m, r2, r1, s));
      CHECK(v <= prev);
      CHECK(v >= 0.0);
      CHECK(v <= ball_volume(m, std::min(r1, r2)) * (1 + 1e-15));
      prev = v;
    }
  }
}

TEST_CASE("lens near tangency keeps relative accuracy") {
  // Two unit disks with gap g: each cap has height g/2, area (4/3) sqrt(2) h^{3/2} (1 - 3h/20 + ...).
  for (double g : {1e-4, 1e-6, 1e-8}) {
    const double h = g / 2;
    const double expect = 2 * (4.0 / 3.0) * std::sqrt(2.0) * std::pow(h, 1.5) * (1 - 3 * h / 20);
    CHECK(lens_volume(2, 1, 1, 2 - g) == doctest::Approx(expect).epsilon(1e-6));
    CHECK(lens_volume(3, 1, 1, 2 - g) == doctest::Approx(spatial_lens(1, 1, 2 - g)).epsilon(1e-8));
  }
}

TEST_CASE("lens against hit counts on random triples") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  int outside = 0;
  for (int k = 0; k < 100; ++k) {
    const int m = 2 + k % 2;
    const double r1 = u(gen), r2 = u(gen), s = (r1 + r2) * std::uniform_real_distribution<double>(0, 1)(gen);
    const auto [v, se] = lens_mc(m, r1, r2, s, 1'000'000, 100 + k);
    if (std::abs(v - lens_volume(m, r1, r2, s)) > 4 * se + 1e-12) ++outside;
  }
  CHECK(outside == 0);
}

TEST_CASE("ball union construction and membership") {
  BallUnion disk(2, {Ball{{0, 0}, 1.0}});
  CHECK(disk.contains(Point{0, 0}));
  CHECK_FALSE(disk.contains(Point{2, 0}));
  CHECK_THROWS_AS(disk.contains(Point{0, 0, 0}), DimensionMismatch);

  BallUnion two(2, {Ball{{0, 0}, 1.0}, Ball{{3, 0}, 1.0}});
  CHECK(two.contains(Point{3.5, 0}));
  CHECK(two.volume() == doctest::Approx(2 * pi));

  CHECK_NOTHROW(BallUnion(2, {Ball{{0, 0}, 1.0}, Ball{{2, 0}, 1.0}}));
  CHECK_THROWS_AS(BallUnion(2, {Ball{{0, 0}, 1.0}, Ball{{1.999, 0}, 1.0}}), OverlappingBalls);
  CHECK_THROWS(BallUnion(2, {Ball{{0, 0}, -1.0}}));
  CHECK_THROWS(BallUnion(1, {Ball{{0}, 1.0}}));
}

TEST_CASE("grid lookup agrees with a linear scan") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-20, 20), ur(0.05, 0.4);
  std::vector<Ball> balls;
  while (balls.size() < 300) {
    Ball b{{u(gen), u(gen)}, ur(gen)};
    bool ok = true;
    for (const auto& o : balls)
      if (std::hypot(o.center[0] - b.center[0], o.center[1] - b.center[1]) < o.radius + b.radius) ok = false;
    if (ok) balls.push_back(b);
  }
  BallUnion omega(2, balls);
  for (int k = 0; k < 20000; ++k) {
    const Point x{u(gen), u(gen)};
    std::optional<std::size_t> scan;
    for (std::size_t i = 0; i < balls.size(); ++i)
      if (std::hypot(x[0] - balls[i].center[0], x[1] - balls[i].center[1]) < balls[i].radius) scan = i;
    CHECK(omega.locate(x) == scan);
  }
}

TEST_CASE("uniform sampling") {
  BallUnion disk(2, {Ball{{0, 0}, 1.0}});
  const auto pts = sample_uniform(disk, 1'000'000, Stream{9, 0});
  double s = 0, ss = 0, mx = 0, my = 0;
  for (const auto& p : pts) {
    const double q = p[0] * p[0] + p[1] * p[1];
    s += q;
    ss += q * q;
    mx += p[0];
    my += p[1];
  }
  const double n = static_cast<double>(pts.size());
  const double mean = s / n, sd = std::sqrt(ss / n - mean * mean);
  CHECK(std::abs(mean - 0.5) < 3 * sd / std::sqrt(n));
  CHECK(std::abs(mx / n) < 4 * 0.5 / std::sqrt(n));
  CHECK(std::abs(my / n) < 4 * 0.5 / std::sqrt(n));

  BallUnion two(2, {Ball{{0, 0}, 1.0}, Ball{{5, 0}, 1.0}});
  const auto q = sample_uniform(two, 1'000'000, Stream{9, 1});
  double first = 0;
  for (const auto& p : q) first += p[0] < 2.5;
  CHECK(std::abs(first / 1e6 - 0.5) < 3 * 0.5 / 1e3);

  BallUnion mixed(3, {Ball{{0, 0, 0}, 1.0}, Ball{{4, 0, 0}, 0.5}});
  const auto w = sample_uniform(mixed, 400'000, Stream{9, 2});
  double big = 0;
  for (const auto& p : w) big += p[0] < 2;
  const double expect = 1.0 / (1.0 + 0.125);
  CHECK(std::abs(big / 4e5 - expect) < 4 * std::sqrt(expect * (1 - expect) / 4e5));

  CHECK_THROWS(sample_uniform(disk, 0, Stream{1, 0}));
  CHECK(sample_uniform(two, 10, Stream{4, 4}) == sample_uniform(two, 10, Stream{4, 4}));
}

TEST_CASE("separation gap") {
  BallUnion lat(2, {Ball{{0, 0}, 0.25}, Ball{{1, 0}, 0.2}, Ball{{0, 1}, 0.1}});
  CHECK(separation_delta(lat, 1.0).delta == doctest::Approx(0.5));
  BallUnion touching(2, {Ball{{0, 0}, 0.5}, Ball{{1, 0}, 0.5}});
  CHECK_THROWS_AS(separation_delta(touching, 1.0), NonPositiveGap);
  BallUnion generic(2, {Ball{{0, 0}, 1.0}, Ball{{3, 0}, 1.0}});
  CHECK(separation_delta(generic, 0.0).delta == doctest::Approx(1.0));
}

}
