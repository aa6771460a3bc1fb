#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatlab/asymptotics.hpp"
#include "heatlab/cli.hpp"
#include "heatlab/report_io.hpp"
#include "heatlab/tgrid.hpp"

namespace fs = std::filesystem;
using namespace heatlab;

namespace {

int run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "heatlab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "heatlab_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("time grid grammar") {
  const auto g = parse_t_grid("logspace:1e-4:10:15");
  REQUIRE(g.size() == 15);
  CHECK(g.front() == doctest::Approx(1e-4));
  CHECK(g.back() == doctest::Approx(10));
  CHECK(g[5] == doctest::Approx(std::pow(10.0, -4 + 5 * 5.0 / 14)));
  const auto l = parse_t_grid("linspace:0.1:1:10");
  CHECK(l[3] == doctest::Approx(0.4));
  CHECK(parse_t_grid("0.3,0.1,0.2,0.1") == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(parse_t_grid("2") == std::vector<double>{2.0});
  for (const char* bad : {"", "logspace:1:2", "logspace:0:1:3", "linspace:2:1:3", "0.1,-1", "abc", "1,,2",
                          "linspace:1:2:x", "cubic:1:2:3", "inf"})
    CHECK_THROWS_AS(parse_t_grid(bad), std::invalid_argument);
}

TEST_CASE("constants") {
  const auto out = scratch("constants.json");
  REQUIRE(run_cli({"--out", out.string(), "constants", "--m", "2"}) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["C"].get<double>() == 4.0);
  CHECK(j["K1"].get<double>() == doctest::Approx(std::exp(-4.0) / 16).epsilon(1e-12));
  CHECK(j["L1"].get<double>() == j["K1"].get<double>());
  CHECK(j["c_m"].get<double>() == doctest::Approx(128 * M_PI).epsilon(1e-14));
  CHECK_FALSE(j.contains("generated_at"));
  REQUIRE(run_cli({"--stamp", "--out", out.string(), "constants"}) == 0);
  CHECK(nlohmann::json::parse(slurp(out)).contains("generated_at"));
}

TEST_CASE("ball csv schema") {
  const auto out = scratch("ball.csv");
  REQUIRE(run_cli({"-o", out.string(), "ball", "--m", "2", "--r", "1", "--t", "logspace:1e-4:10:15", "--tol", "1e-8"}) == 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,H,H_err,F,F_err");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.find('e') != std::string::npos);
  }
  CHECK(rows == 15);

  REQUIRE(run_cli({"--format", "json", "-o", out.string(), "ball", "--t", "0.1"}) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["columns"] == nlohmann::json::array({"t", "H", "H_err", "F", "F_err"}));
  CHECK(j["rows"][0]["H"].get<double>() + j["rows"][0]["F"].get<double>() == doctest::Approx(M_PI));

  REQUIRE(run_cli({"--stamp", "-o", out.string(), "ball", "--t", "0.1"}) == 0);
  CHECK(slurp(out).rfind("# generated_at ", 0) == 0);
}

TEST_CASE("csv numbers round-trip") {
  CsvTable t{{"x", "label"}, {{0.1, std::string("a")}, {1.0 / 3.0, std::string("b")}}};
  const std::string csv = to_csv(t);
  CHECK(csv.rfind("x,label\n", 0) == 0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  CHECK(std::stod(line.substr(0, line.find(','))) == 0.1);
  std::getline(in, line);
  CHECK(std::stod(line.substr(0, line.find(','))) == 1.0 / 3.0);
}

TEST_CASE("lattice and fit") {
  const auto csv = scratch("lattice.csv");
  REQUIRE(run_cli({"-o", csv.string(), "lattice", "--alpha", "1.5", "--t", "logspace:1e-6:1e-4:5", "--eps", "1e-10"}) == 0);
  std::istringstream in(slurp(csv));
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,value,err,regime,predicted_exponent");
  const auto js = scratch("fit.json");
  REQUIRE(run_cli({"-o", js.string(), "fit", "--in", csv.string()}) == 0);
  const auto j = nlohmann::json::parse(slurp(js));
  CHECK(j["points"] == 5);
  CHECK(j["predicted_exponent"].get<double>() == 0.5);
  // Same fit in-process on the same sums; the perimeter remainder keeps the
  // slope below 1/2 at these t.
  std::vector<PowerLawPoint> pts;
  const auto fam = make_lattice_family(2, 0.25, 1.5);
  for (double t : logspace(1e-6, 1e-4, 5)) {
    const auto F = lattice_heat_loss(fam, t, 1e-10).estimate;
    pts.push_back({t, F.value, F.error});
  }
  CHECK(j["exponent"].get<double>() == doctest::Approx(fit_power_law(pts).exponent).epsilon(1e-12));
  CHECK(j["exponent"].get<double>() > 0.4);
  CHECK(j["exponent"].get<double>() < 0.5);

  const auto ball = scratch("ball_fit.csv");
  REQUIRE(run_cli({"-o", ball.string(), "ball", "--t", "logspace:1e-8:1e-6:5"}) == 0);
  REQUIRE(run_cli({"-o", js.string(), "fit", "--in", ball.string(), "--value", "F", "--error", "F_err"}) == 0);
  CHECK(nlohmann::json::parse(slurp(js))["exponent"].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("verify report schema") {
  const auto out = scratch("t3ii.json");
  REQUIRE(run_cli({"-o", out.string(), "verify", "--theorem", "T3ii", "--m", "2", "--a", "0.25", "--window", "5", "--t",
                   "logspace:1e-3:1:8", "--seed", "7", "--samples", "100000"}) == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["theorem_id"] == "T3ii");
  CHECK(j["passed"] == true);
  CHECK(j["grid"].size() == 8);
  REQUIRE(j["rows"].size() == 8);
  for (const char* key : {"t", "lower", "mid", "upper", "sigma", "pass"}) CHECK(j["rows"][0].contains(key));
}

TEST_CASE("exit codes") {
  const auto out = scratch("codes.json");
  CHECK(run_cli({"-o", out.string(), "verify", "--theorem", "L2", "--alpha", "1.5", "--t", "1e-3,1e-2", "--terms", "20"}) == 0);
  CHECK(nlohmann::json::parse(slurp(out))["passed"] == true);
  // Demanding a positive margin of 1e30 standard errors cannot be met.
  CHECK(run_cli({"-o", out.string(), "verify", "--theorem", "T1", "--a", "0.25", "--window", "1", "--t", "0.1",
                 "--samples", "1000", "--sigma-mult", "-1e30"}) == 1);
  CHECK(run_cli({"-o", out.string(), "ball", "--t", "-1"}) == 2);
  CHECK(run_cli({"-o", out.string(), "frobnicate"}) == 2);
  CHECK(run_cli({"-o", out.string(), "verify", "--theorem", "T9"}) == 2);
  CHECK(run_cli({"-o", out.string(), "lattice", "--alpha", "0.2", "--t", "0.1"}) == 2);
  CHECK(run_cli({"-o", out.string(), "lattice", "--alpha", "0.4", "--t", "0.5", "--eps", "1e-12"}) == 3);
  CHECK(run_cli({"-o", out.string(), "lattice", "--alpha", "0.4", "--t", "1e-5", "--max-balls", "10"}) == 3);
}

TEST_CASE("byte-identical reruns") {
  const auto a = scratch("det_a.csv"), b = scratch("det_b.csv");
  const std::vector<std::string> base{"functionals", "--a", "0.25", "--alpha", "0.4", "--count", "50", "--t",
                                      "logspace:1e-3:1:3", "--samples", "5000", "--seed", "11"};
  auto with = [&](std::vector<std::string> head) {
    head.insert(head.end(), base.begin(), base.end());
    return head;
  };
  REQUIRE(run_cli(with({"-o", a.string()})) == 0);
  REQUIRE(run_cli(with({"--threads", "3", "-o", b.string()})) == 0);
  CHECK(slurp(a) == slurp(b));
}

}
