#include "heatlab/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace heatlab {

namespace {

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

std::string report_json(const VerificationReport& report, bool stamp) {
  nlohmann::ordered_json j;
  j["theorem_id"] = std::string(to_string(report.theorem_id));
  j["grid"] = report.t_grid;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["t"] = r.t;
    row["lower"] = number(r.lower);
    row["mid"] = number(r.mid);
    row["upper"] = number(r.upper);
    row["sigma"] = number(r.sigma());
    row["pass"] = r.pass;
    row["sigma_lower"] = number(r.sigma_lower);
    row["sigma_mid"] = number(r.sigma_mid);
    row["sigma_upper"] = number(r.sigma_upper);
    row["ratio"] = number(r.ratio);
    row["label"] = r.label;
    j["rows"].push_back(std::move(row));
  }
  j["passed"] = report.passed;
  j["sigma_mult"] = report.sigma_mult;
  j["notes"] = report.notes;
  if (stamp) j["generated_at"] = utc_timestamp();
  return j.dump(2) + "\n";
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      if (const double* d = std::get_if<double>(&row[i])) {
        std::snprintf(buf, sizeof buf, "%.17e", *d);
        out += buf;
      } else {
        out += std::get<std::string>(row[i]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_output(const std::filesystem::path& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path.string());
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace heatlab
