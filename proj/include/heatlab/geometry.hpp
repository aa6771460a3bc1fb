#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "heatlab/rng.hpp"

namespace heatlab {

using Point = std::vector<double>;

/// Volume of the unit ball in R^m, pi^{m/2} / Gamma(m/2 + 1).
double unit_ball_volume(int m);

double ball_volume(int m, double r);

/// Surface measure of the sphere of radius r, m * omega_m * r^{m-1}.
double ball_perimeter(int m, double r);

/// Volume of the cap of height h in [0, 2r] cut from a ball of radius r.
double cap_volume(int m, double r, double h);

/// |B(0; r1) ∩ B(s e_1; r2)|.
///
/// Sum of two hyperspherical caps, each through the regularized incomplete
/// beta function. Cap heights are formed as products of the gaps
/// (r1 + r2 - s) and (s ± (r1 - r2)), so the result stays accurate to
/// relative precision as s approaches tangency.
double lens_volume(int m, double r1, double r2, double s);

/// omega_m r^m - lens_volume(m, r, r, s), computed without cancellation for
/// small s. This is the volume of B(0; r) not covered by its translate.
double lens_deficit(int m, double r, double s);

struct Ball {
  Point center;
  double radius = 0.0;
};

struct SeparationGap {
  double delta = 0.0;
};

/// A finite union of pairwise disjoint open balls in R^m, m >= 2.
///
/// Construction rejects overlapping interiors (touching closures are fine),
/// so |Omega| is the plain sum of the ball volumes. Point location goes
/// through a uniform hash grid with cell size max_i r_i.
class BallUnion {
 public:
  BallUnion(int dim, std::vector<Ball> balls, std::string label = {});

  int dim() const { return dim_; }
  std::size_t size() const { return balls_.size(); }
  const std::vector<Ball>& balls() const { return balls_; }
  const Ball& ball(std::size_t i) const { return balls_[i]; }
  const std::string& label() const { return label_; }

  double volume() const { return volume_; }
  double perimeter() const;
  double max_radius() const { return max_radius_; }
  /// Sum over balls of r_i^p.
  double radius_power_sum(double p) const;

  bool contains(std::span<const double> x) const { return locate(x).has_value(); }
  bool contains(const Point& x) const;

  /// Index of the ball containing x, if any.
  std::optional<std::size_t> locate(std::span<const double> x) const;

  /// Calls fn(i) for every ball whose closure comes within distance R of x,
  /// i.e. |x - z_i| < R + r_i. May also call it for a few balls slightly
  /// farther away; callers test distances themselves.
  template <class Fn>
  void for_each_near(std::span<const double> x, double R, Fn&& fn) const {
    if (!use_grid_ || near_query_cells(R) > balls_.size()) {
      for (std::size_t i = 0; i < balls_.size(); ++i) fn(i);
      return;
    }
    visit_center_cells(x, R + max_radius_, [&](std::uint32_t i) { fn(i); });
  }

  /// Draws one point uniformly from Omega into `out` (size dim) and returns
  /// the index of the ball it fell in. A ball is picked with probability
  /// proportional to r_i^m, then a point in it by the polar method:
  /// a normalized Gaussian direction and radius r_i U^{1/m}.
  std::size_t draw_uniform(CounterRng& rng, std::span<double> out) const;

 private:
  using CellKey = std::uint64_t;
  CellKey cell_key(std::span<const std::int64_t> cell) const;
  std::size_t near_query_cells(double R) const;
  template <class Fn>
  void visit_center_cells(std::span<const double> x, double reach, Fn&& fn) const;

  int dim_;
  std::vector<Ball> balls_;
  std::string label_;
  double volume_ = 0.0;
  double max_radius_ = 0.0;
  std::vector<double> cumulative_weight_;

  bool use_grid_ = false;
  double cell_ = 1.0;
  std::unordered_map<CellKey, std::vector<std::uint32_t>> overlap_cells_;
  std::unordered_map<CellKey, std::vector<std::uint32_t>> center_cells_;
};

template <class Fn>
void BallUnion::visit_center_cells(std::span<const double> x, double reach, Fn&& fn) const {
  std::int64_t lo[16], hi[16], cur[16];
  for (int d = 0; d < dim_; ++d) {
    lo[d] = static_cast<std::int64_t>(std::floor((x[d] - reach) / cell_));
    hi[d] = static_cast<std::int64_t>(std::floor((x[d] + reach) / cell_));
    cur[d] = lo[d];
  }
  for (;;) {
    if (auto it = center_cells_.find(cell_key({cur, static_cast<std::size_t>(dim_)})); it != center_cells_.end())
      for (auto i : it->second) fn(i);
    int d = 0;
    while (d < dim_ && cur[d] == hi[d]) {
      cur[d] = lo[d];
      ++d;
    }
    if (d == dim_) return;
    ++cur[d];
  }
}

/// n points i.i.d. uniform on Omega; point k uses CounterRng(stream, k).
std::vector<Point> sample_uniform(const BallUnion& omega, std::size_t n, Stream stream);

/// Separation gap of a ball union.
///
/// When every center lies on the lattice spacing * Z^m, returns
/// spacing - 2 max_i r_i; otherwise min_{i != j}(|z_i - z_j| - r_i - r_j).
/// Pass spacing <= 0 to force the generic gap. Throws NonPositiveGap when
/// the gap is not strictly positive.
SeparationGap separation_delta(const BallUnion& omega, double lattice_spacing);

}  // namespace heatlab
