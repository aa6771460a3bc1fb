#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace heatlab {

enum class TheoremId { T1, T2, T3i, T3ii, L2, FACTS, T4 };

std::string_view to_string(TheoremId id);
TheoremId theorem_from_string(std::string_view name);

/// One grid point of a verification: lower <= mid <= upper is asserted.
///
/// sigma_* are the uncertainties entering the slack (standard errors for
/// Monte Carlo quantities, certified bounds for deterministic ones). A side
/// that does not apply is recorded as ±infinity with zero sigma.
struct ReportRow {
  double t = 0.0;
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
  double sigma_lower = 0.0;
  double sigma_mid = 0.0;
  double sigma_upper = 0.0;
  double ratio = 0.0;  ///< a row-specific tightness ratio, documented per check
  std::string label;
  bool pass = false;

  /// Combined sigma of the tighter of the two margins.
  double sigma() const;
  double lower_margin() const { return mid - lower; }
  double upper_margin() const { return upper - mid; }
};

struct VerificationReport {
  TheoremId theorem_id = TheoremId::T1;
  std::vector<double> t_grid;
  std::vector<ReportRow> rows;
  bool passed = false;
  double sigma_mult = 3.0;
  std::vector<std::string> notes;

  /// Sets row.pass from its margins and the slack multiplier.
  void judge(ReportRow& row) const;
  /// passed = every row passes (and there is at least one row).
  void finalize();
};

/// Slack rule shared by all checks: margin >= -mult * sqrt(sa^2 + sb^2).
bool within_slack(double margin, double sigma_a, double sigma_b, double mult);

}  // namespace heatlab
