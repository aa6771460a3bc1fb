#include "heatlab/tgrid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatlab {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) return out;
    pos = next + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("t grid: bad number '" + std::string(s) + "'");
  return v;
}

std::size_t to_count(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v == 0)
    throw std::invalid_argument("t grid: bad count '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("logspace: bounds must be positive");
  std::vector<double> out(n);
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = n == 1 ? lo : std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
  if (n > 1) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<double> parse_t_grid(std::string_view spec) {
  spec = trim(spec);
  if (spec.empty()) throw std::invalid_argument("t grid: empty specification");
  std::vector<double> grid;
  const bool log = spec.starts_with("logspace:");
  if (log || spec.starts_with("linspace:")) {
    const auto parts = split(spec, ':');
    if (parts.size() != 4) throw std::invalid_argument("t grid: expected <kind>:<lo>:<hi>:<n>");
    const double lo = to_double(parts[1]), hi = to_double(parts[2]);
    const std::size_t n = to_count(parts[3]);
    if (!(lo <= hi)) throw std::invalid_argument("t grid: lo must not exceed hi");
    grid = log ? logspace(lo, hi, n) : linspace(lo, hi, n);
  } else {
    for (auto item : split(spec, ',')) grid.push_back(to_double(item));
  }
  for (double t : grid)
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t grid: times must be positive and finite");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace heatlab
