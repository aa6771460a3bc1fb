#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "heatlab/report.hpp"

namespace heatlab {

/// Verification report as JSON:
///   {theorem_id, grid, rows: [{t, lower, mid, upper, sigma, pass, ...}], passed, notes}
/// Infinite bounds are written as null. `stamp` adds a generated_at field,
/// the only part of the output that is not reproducible.
std::string report_json(const VerificationReport& report, bool stamp = false);

using CsvCell = std::variant<double, std::string>;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

/// Numbers in round-trip scientific notation (%.17e).
std::string to_csv(const CsvTable& table);

/// UTC time as ISO 8601, for --stamp.
std::string utc_timestamp();

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::filesystem::path& path, const std::string& text);

}  // namespace heatlab
