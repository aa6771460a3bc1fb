#pragma once

#include <string_view>
#include <vector>

namespace heatlab {

/// n log-spaced points from lo to hi inclusive (n = 1 gives {lo}).
std::vector<double> logspace(double lo, double hi, std::size_t n);
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Parses `logspace:<lo>:<hi>:<n>`, `linspace:<lo>:<hi>:<n>` or a comma list
/// into a sorted grid of distinct positive times. Throws std::invalid_argument.
std::vector<double> parse_t_grid(std::string_view spec);

}  // namespace heatlab
