#include "heatlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatlab {

std::string_view to_string(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    case TheoremId::T3i: return "T3i";
    case TheoremId::T3ii: return "T3ii";
    case TheoremId::L2: return "L2";
    case TheoremId::FACTS: return "FACTS";
    case TheoremId::T4: return "T4";
  }
  return "?";
}

TheoremId theorem_from_string(std::string_view name) {
  for (auto id : {TheoremId::T1, TheoremId::T2, TheoremId::T3i, TheoremId::T3ii, TheoremId::L2, TheoremId::FACTS,
                  TheoremId::T4})
    if (to_string(id) == name) return id;
  throw std::invalid_argument("unknown theorem id: " + std::string(name));
}

bool within_slack(double margin, double sigma_a, double sigma_b, double mult) {
  if (std::isnan(margin)) return false;
  return margin >= -mult * std::hypot(sigma_a, sigma_b);
}

double ReportRow::sigma() const {
  const double lo = std::hypot(sigma_mid, sigma_lower);
  const double hi = std::hypot(sigma_mid, sigma_upper);
  if (std::isinf(lower)) return hi;
  if (std::isinf(upper)) return lo;
  return lower_margin() / std::max(lo, 1e-300) < upper_margin() / std::max(hi, 1e-300) ? lo : hi;
}

void VerificationReport::judge(ReportRow& row) const {
  row.pass = within_slack(row.lower_margin(), row.sigma_mid, row.sigma_lower, sigma_mult) &&
             within_slack(row.upper_margin(), row.sigma_mid, row.sigma_upper, sigma_mult);
}

void VerificationReport::finalize() {
  passed = !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

}  // namespace heatlab
