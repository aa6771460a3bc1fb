#include "heatlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

constexpr std::size_t kGridThreshold = 8;
constexpr int kMaxGridDim = 16;

void require_dim(int m, int min_dim) {
  if (m < min_dim) throw std::invalid_argument("dimension must be >= " + std::to_string(min_dim));
}

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace

double unit_ball_volume(int m) {
  require_dim(m, 1);
  return std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

double ball_volume(int m, double r) {
  if (r < 0.0) throw std::invalid_argument("ball_volume: negative radius");
  return unit_ball_volume(m) * std::pow(r, m);
}

double ball_perimeter(int m, double r) {
  require_dim(m, 2);
  if (!(r > 0.0)) throw std::invalid_argument("ball_perimeter: radius must be positive");
  return m * unit_ball_volume(m) * std::pow(r, m - 1);
}

double cap_volume(int m, double r, double h) {
  const double full = ball_volume(m, r);
  if (h <= 0.0) return 0.0;
  if (h >= 2.0 * r) return full;
  if (h > r) return full - cap_volume(m, r, 2.0 * r - h);
  // Half-chord squared over r^2: x = h(2r - h) / r^2. Near the equator
  // use the complement 1 - x = ((r - h) / r)^2, which keeps its precision.
  const double x = std::min(1.0, (h / r) * ((2.0 * r - h) / r));
  if (x <= 0.5) return 0.5 * full * boost::math::ibeta(0.5 * (m + 1), 0.5, x);
  const double y = ((r - h) / r) * ((r - h) / r);
  return 0.5 * full * (1.0 - boost::math::ibeta(0.5, 0.5 * (m + 1), y));
}

double lens_volume(int m, double r1, double r2, double s) {
  if (!(r1 > 0.0) || !(r2 > 0.0) || s < 0.0) throw std::invalid_argument("lens_volume: bad arguments");
  if (s >= r1 + r2) return 0.0;
  if (s <= std::abs(r1 - r2)) return ball_volume(m, std::min(r1, r2));
  const double gap = r1 + r2 - s;
  const double h1 = (s + (r2 - r1)) * gap / (2.0 * s);
  const double h2 = (s + (r1 - r2)) * gap / (2.0 * s);
  return cap_volume(m, r1, h1) + cap_volume(m, r2, h2);
}

double lens_deficit(int m, double r, double s) {
  if (!(r > 0.0) || s < 0.0) throw std::invalid_argument("lens_deficit: bad arguments");
  const double full = ball_volume(m, r);
  if (s >= 2.0 * r) return full;
  // Twice the slab between the mid-plane and distance s/2 from the center.
  const double y = (0.5 * s / r) * (0.5 * s / r);
  return full * boost::math::ibeta(0.5, 0.5 * (m + 1), y);
}

BallUnion::BallUnion(int dim, std::vector<Ball> balls, std::string label)
    : dim_(dim), balls_(std::move(balls)), label_(std::move(label)) {
  require_dim(dim_, 2);
  if (balls_.empty()) throw std::invalid_argument("BallUnion: no balls");
  if (balls_.size() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("BallUnion: too many balls");

  const double omega = unit_ball_volume(dim_);
  double weight = 0.0;
  cumulative_weight_.reserve(balls_.size());
  for (const auto& b : balls_) {
    if (static_cast<int>(b.center.size()) != dim_) throw DimensionMismatch("BallUnion: center dimension mismatch");
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw std::invalid_argument("BallUnion: radius must be positive");
    for (double c : b.center)
      if (!std::isfinite(c)) throw std::invalid_argument("BallUnion: non-finite center");
    max_radius_ = std::max(max_radius_, b.radius);
    weight += std::pow(b.radius, dim_);
    cumulative_weight_.push_back(weight);
  }
  volume_ = omega * weight;

  use_grid_ = balls_.size() > kGridThreshold && dim_ <= kMaxGridDim;
  cell_ = max_radius_;
  std::vector<std::int64_t> cell(dim_);
  if (use_grid_) {
    for (std::uint32_t i = 0; i < balls_.size(); ++i) {
      const auto& b = balls_[i];
      for (int d = 0; d < dim_; ++d) cell[d] = static_cast<std::int64_t>(std::floor(b.center[d] / cell_));
      center_cells_[cell_key(cell)].push_back(i);

      // Register the ball in every cell its bounding box touches.
      std::vector<std::int64_t> lo(dim_), hi(dim_);
      for (int d = 0; d < dim_; ++d) {
        lo[d] = static_cast<std::int64_t>(std::floor((b.center[d] - b.radius) / cell_));
        hi[d] = static_cast<std::int64_t>(std::floor((b.center[d] + b.radius) / cell_));
      }
      cell = lo;
      for (;;) {
        overlap_cells_[cell_key(cell)].push_back(i);
        int d = 0;
        while (d < dim_ && cell[d] == hi[d]) {
          cell[d] = lo[d];
          ++d;
        }
        if (d == dim_) break;
        ++cell[d];
      }
    }
  }

  // Disjointness: |z_i - z_j| >= r_i + r_j, exact comparison.
  auto check_pair = [&](std::size_t i, std::size_t j) {
    const double reach = balls_[i].radius + balls_[j].radius;
    if (squared_distance(balls_[i].center, balls_[j].center) < reach * reach)
      throw OverlappingBalls("BallUnion: balls " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
  };
  for (std::size_t i = 0; i < balls_.size(); ++i) {
    if (use_grid_) {
      visit_center_cells(balls_[i].center, balls_[i].radius + max_radius_, [&](std::uint32_t j) {
        if (j > i) check_pair(i, j);
      });
    } else {
      for (std::size_t j = i + 1; j < balls_.size(); ++j) check_pair(i, j);
    }
  }
}

double BallUnion::perimeter() const {
  double sum = 0.0;
  for (const auto& b : balls_) sum += ball_perimeter(dim_, b.radius);
  return sum;
}

double BallUnion::radius_power_sum(double p) const {
  double sum = 0.0;
  for (const auto& b : balls_) sum += std::pow(b.radius, p);
  return sum;
}

bool BallUnion::contains(const Point& x) const {
  if (static_cast<int>(x.size()) != dim_) throw DimensionMismatch("contains: point dimension mismatch");
  return locate(x).has_value();
}

std::optional<std::size_t> BallUnion::locate(std::span<const double> x) const {
  auto inside = [&](std::size_t i) {
    const auto& b = balls_[i];
    return squared_distance(x, b.center) < b.radius * b.radius;
  };
  if (!use_grid_) {
    for (std::size_t i = 0; i < balls_.size(); ++i)
      if (inside(i)) return i;
    return std::nullopt;
  }
  std::int64_t cell[kMaxGridDim];
  for (int d = 0; d < dim_; ++d) cell[d] = static_cast<std::int64_t>(std::floor(x[d] / cell_));
  auto it = overlap_cells_.find(cell_key({cell, static_cast<std::size_t>(dim_)}));
  if (it == overlap_cells_.end()) return std::nullopt;
  for (auto i : it->second)
    if (inside(i)) return i;
  return std::nullopt;
}

BallUnion::CellKey BallUnion::cell_key(std::span<const std::int64_t> cell) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (auto c : cell) h = mix(h ^ static_cast<std::uint64_t>(c));
  return h;
}

std::size_t BallUnion::near_query_cells(double R) const {
  const double per_dim = 2.0 * std::ceil((R + max_radius_) / cell_) + 1.0;
  const double cells = std::pow(per_dim, dim_);
  return cells > 1e18 ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(cells);
}

std::size_t BallUnion::draw_uniform(CounterRng& rng, std::span<double> out) const {
  std::size_t i = 0;
  if (balls_.size() > 1) {
    const double u = rng.uniform() * cumulative_weight_.back();
    i = static_cast<std::size_t>(std::upper_bound(cumulative_weight_.begin(), cumulative_weight_.end(), u) -
                                 cumulative_weight_.begin());
    i = std::min(i, balls_.size() - 1);
  }
  const auto& b = balls_[i];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (int d = 0; d < dim_; ++d) {
      out[d] = rng.normal();
      norm2 += out[d] * out[d];
    }
  } while (norm2 == 0.0);
  const double scale = b.radius * std::pow(rng.uniform(), 1.0 / dim_) / std::sqrt(norm2);
  for (int d = 0; d < dim_; ++d) out[d] = b.center[d] + scale * out[d];
  return i;
}

std::vector<Point> sample_uniform(const BallUnion& omega, std::size_t n, Stream stream) {
  if (n == 0) throw std::invalid_argument("sample_uniform: n must be >= 1");
  std::vector<Point> points(n, Point(omega.dim()));
  for (std::size_t k = 0; k < n; ++k) {
    CounterRng rng(stream, k);
    omega.draw_uniform(rng, points[k]);
  }
  return points;
}

SeparationGap separation_delta(const BallUnion& omega, double lattice_spacing) {
  bool on_lattice = lattice_spacing > 0.0;
  if (on_lattice) {
    for (const auto& b : omega.balls()) {
      for (double c : b.center) {
        const double q = c / lattice_spacing;
        if (q != std::round(q)) {
          on_lattice = false;
          break;
        }
      }
      if (!on_lattice) break;
    }
  }
  double delta = 0.0;
  if (on_lattice) {
    delta = lattice_spacing - 2.0 * omega.max_radius();
  } else {
    delta = std::numeric_limits<double>::infinity();
    const auto& balls = omega.balls();
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t j = i + 1; j < balls.size(); ++j)
        delta = std::min(delta, std::sqrt(squared_distance(balls[i].center, balls[j].center)) - balls[i].radius -
                                    balls[j].radius);
  }
  if (!(delta > 0.0)) throw NonPositiveGap("separation gap is not positive: " + std::to_string(delta));
  return {delta};
}

}  // namespace heatlab
