#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace heatlab {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod_panel(F& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
  return {a, b, v, err};
}

}  // namespace detail

/// Globally adaptive 21-point Gauss–Kronrod integration of f over [a, b].
///
/// The panel with the largest |K21 - G10| is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol * |value|) or `max_panels` is
/// reached. `initial_panels` pre-splits the interval uniformly, which helps
/// when the integrand has a narrow feature at a known scale.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                           std::size_t max_panels = 4000, std::size_t initial_panels = 1) {
  QuadratureResult out;
  if (!(b > a)) return out;

  std::vector<detail::Panel> storage;
  storage.reserve(max_panels + initial_panels);
  std::priority_queue<detail::Panel> heap(std::less<detail::Panel>{}, std::move(storage));

  double value = 0.0, error = 0.0;
  const double h = (b - a) / static_cast<double>(initial_panels);
  for (std::size_t k = 0; k < initial_panels; ++k) {
    const double lo = a + h * static_cast<double>(k);
    const double hi = (k + 1 == initial_panels) ? b : lo + h;
    auto p = detail::kronrod_panel(f, lo, hi);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  std::size_t panels = initial_panels;

  auto done = [&] { return error <= std::max(abs_tol, rel_tol * std::abs(value)); };
  while (!done() && panels < max_panels) {
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted at double precision
    heap.pop();
    auto left = detail::kronrod_panel(f, worst.a, mid);
    auto right = detail::kronrod_panel(f, mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Recompute the totals from the panels to shed the drift of the running sums.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  out.evaluations = 21 * (2 * panels - initial_panels);
  out.converged = done();
  return out;
}

}  // namespace heatlab
