#include "heatlab/cli.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heatlab/asymptotics.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/estimators.hpp"
#include "heatlab/functionals.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/report_io.hpp"
#include "heatlab/tgrid.hpp"
#include "heatlab/theorems.hpp"

namespace heatlab::cli {

namespace {

struct Common {
  std::string out;
  std::string format = "csv";
  bool stamp = false;
  unsigned threads = default_threads();
};

// Geometry selection shared by functionals and verify.
struct Shape {
  int m = 2;
  double r = 1.0;
  double a = 0.25;
  double alpha = 0.0;
  std::size_t count = 0;
  int window = -1;
};

BallUnion make_shape(const Shape& s) {
  if (s.window >= 0) return constant_radius_window(s.m, s.window, s.a);
  if (s.count > 0) return lattice_window(make_lattice_family(s.m, s.a, s.alpha), s.count);
  return BallUnion(s.m, {Ball{Point(s.m, 0.0), s.r}}, "single ball");
}

void add_shape_options(CLI::App* app, Shape& s) {
  app->add_option("--m", s.m, "Dimension")->capture_default_str();
  app->add_option("--r", s.r, "Radius of a single ball at the origin")->capture_default_str();
  app->add_option("--a", s.a, "Lattice scale a (0 < a <= 1/4), or the common radius with --window")
      ->capture_default_str();
  app->add_option("--alpha", s.alpha, "Lattice exponent alpha");
  app->add_option("--count", s.count, "Use the first COUNT balls of the lattice family");
  app->add_option("--window", s.window, "Use {-W..W}^m with common radius a");
}

std::string table_json(const CsvTable& table, bool stamp) {
  nlohmann::ordered_json j;
  j["columns"] = table.header;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const double* d = std::get_if<double>(&row[i]))
        obj[table.header[i]] = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
      else
        obj[table.header[i]] = std::get<std::string>(row[i]);
    }
    j["rows"].push_back(std::move(obj));
  }
  if (stamp) j["generated_at"] = utc_timestamp();
  return j.dump(2) + "\n";
}

void emit_table(const Common& c, const CsvTable& table) {
  if (c.format == "json") {
    write_output(c.out, table_json(table, c.stamp));
    return;
  }
  std::string text = c.stamp ? "# generated_at " + utc_timestamp() + "\n" : std::string{};
  write_output(c.out, text + to_csv(table));
}

int emit_report(const Common& c, const VerificationReport& rep) {
  write_output(c.out, report_json(rep, c.stamp));
  if (!rep.passed) std::cerr << "verification failed: " << to_string(rep.theorem_id) << "\n";
  return rep.passed ? kOk : kVerificationFailed;
}

std::vector<std::pair<double, Estimate>> pairs(const std::vector<double>& grid, const std::vector<Estimate>& v) {
  std::vector<std::pair<double, Estimate>> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out.emplace_back(grid[i], v[i]);
  return out;
}

// Minimal reader for the CSV files this tool writes.
std::vector<PowerLawPoint> read_points(const std::string& path, const std::string& value_col,
                                       const std::string& error_col, double tmin, double tmax,
                                       std::optional<double>& predicted) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::string line;
  std::vector<std::string> header;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split(line);
    break;
  }
  auto col = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int ct = col("t"), cv = col(value_col), ce = col(error_col), cp = col("predicted_exponent");
  if (ct < 0 || cv < 0) throw std::invalid_argument(path + ": need columns t and " + value_col);
  std::vector<PowerLawPoint> pts;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    const double t = std::stod(cells.at(ct));
    if (t < tmin || t > tmax) continue;
    pts.push_back({t, std::stod(cells.at(cv)), ce >= 0 ? std::stod(cells.at(ce)) : 0.0});
    if (cp >= 0) predicted = std::stod(cells.at(cp));
  }
  return pts;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"heatlab: heat content and heat loss of unions of balls"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--threads", common.threads, "Worker threads (results do not depend on it)")->capture_default_str();
  app.add_flag("--stamp", common.stamp, "Add a generation timestamp to the output");
  app.add_option("--out,-o", common.out, "Output file (default: stdout)");
  app.add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Random seed")->envname("HEATLAB_SEED")->capture_default_str();
  };

  // constants
  auto* constants = app.add_subcommand("constants", "Li-Yau constant and the derived sandwich constants");
  int c_m = 2;
  constants->add_option("--m", c_m, "Dimension")->capture_default_str();

  // ball
  auto* ball = app.add_subcommand("ball", "Heat content and loss of one ball by quadrature");
  int b_m = 2;
  double b_r = 1.0, b_tol = 1e-10;
  std::string t_spec = "logspace:1e-4:1:9";
  ball->add_option("--m", b_m, "Dimension")->capture_default_str();
  ball->add_option("--r", b_r, "Radius")->capture_default_str();
  ball->add_option("--t", t_spec, "Time grid: logspace:lo:hi:n, linspace:lo:hi:n or a comma list")
      ->capture_default_str();
  ball->add_option("--tol", b_tol, "Absolute tolerance")->capture_default_str();

  // lattice
  auto* lattice = app.add_subcommand("lattice", "Certified sums over the lattice family r_i = a i^-alpha");
  int l_m = 2;
  double l_a = 0.25, l_alpha = 0.4, l_eps = 1e-8;
  std::string l_quantity = "auto";
  std::uint64_t l_max = LatticeBudget{}.max_balls;
  lattice->add_option("--m", l_m, "Dimension")->capture_default_str();
  lattice->add_option("--a", l_a, "Scale, 0 < a <= 1/4")->capture_default_str();
  lattice->add_option("--alpha", l_alpha, "Exponent")->capture_default_str();
  lattice->add_option("--t", t_spec, "Time grid")->capture_default_str();
  lattice->add_option("--eps", l_eps, "Certified absolute error per point")->capture_default_str();
  lattice->add_option("--quantity", l_quantity, "heat, loss or auto (heat in R1, loss otherwise)")
      ->check(CLI::IsMember({"heat", "loss", "auto"}))
      ->capture_default_str();
  lattice->add_option("--max-balls", l_max, "Largest number of explicitly integrated balls")->capture_default_str();

  // functionals
  auto* functionals = app.add_subcommand("functionals", "G_mu and G_nu on a t grid");
  Shape f_shape;
  std::uint64_t samples = 1'000'000;
  double tol = 1e-12;
  add_shape_options(functionals, f_shape);
  functionals->add_option("--t", t_spec, "Time grid")->capture_default_str();
  functionals->add_option("--samples", samples, "Monte Carlo samples per t (unions of more than one ball)")
      ->capture_default_str();
  functionals->add_option("--tol", tol, "Relative tolerance for a single ball")->capture_default_str();
  add_seed(functionals);

  // verify
  auto* verify = app.add_subcommand("verify", "Verify an inequality on a t grid and emit a JSON report");
  std::string theorem;
  Shape v_shape;
  double sigma_mult = 3.0, v_eps = 1e-10;
  std::uint64_t l2_terms = 50;
  verify->add_option("--theorem", theorem, "T1, T2, T3i, T3ii, L2, FACTS or T4")
      ->required()
      ->check(CLI::IsMember({"T1", "T2", "T3i", "T3ii", "L2", "FACTS", "T4"}));
  add_shape_options(verify, v_shape);
  verify->add_option("--t", t_spec, "Time grid")->capture_default_str();
  verify->add_option("--samples", samples, "Monte Carlo samples per t")->capture_default_str();
  verify->add_option("--tol", tol, "Relative quadrature tolerance")->capture_default_str();
  verify->add_option("--sigma-mult", sigma_mult, "Slack in combined standard errors")->capture_default_str();
  verify->add_option("--eps", v_eps, "Certified error for lattice sums (T4)")->capture_default_str();
  verify->add_option("--terms", l2_terms, "Number of terms N for L2")->capture_default_str();
  add_seed(verify);

  // fit
  auto* fit = app.add_subcommand("fit", "Power-law fit of a t,value,err CSV");
  std::string fit_in, fit_value = "value", fit_error = "err";
  double tmin = 0.0, tmax = std::numeric_limits<double>::infinity();
  fit->add_option("--in", fit_in, "Input CSV (as written by lattice or ball)")->required();
  fit->add_option("--value", fit_value, "Value column")->capture_default_str();
  fit->add_option("--error", fit_error, "Error column (weights; uniform if absent)")->capture_default_str();
  fit->add_option("--tmin", tmin, "Smallest t to include");
  fit->add_option("--tmax", tmax, "Largest t to include");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*constants) {
      const LiYauConstants k = liyau_constant(c_m);
      nlohmann::ordered_json j;
      j["m"] = c_m;
      j["C"] = k.C;
      j["K1"] = k.K1;
      j["K2"] = k.K2;
      j["L1"] = k.L1;
      j["L2"] = k.L2;
      j["c_m"] = single_ball_remainder_constant(c_m);
      if (common.stamp) j["generated_at"] = utc_timestamp();
      write_output(common.out, j.dump(2) + "\n");
      return kOk;
    }

    const std::vector<double> grid = parse_t_grid(t_spec);

    if (*ball) {
      CsvTable table{{"t", "H", "H_err", "F", "F_err"}, {}};
      for (double t : grid) {
        const BallHeat h = ball_heat(b_m, b_r, t, b_tol);
        table.rows.push_back({t, h.content.value, h.content.error, h.loss.value, h.loss.error});
      }
      emit_table(common, table);
      return kOk;
    }

    if (*lattice) {
      const LatticeFamily fam = make_lattice_family(l_m, l_a, l_alpha);
      const Regime reg = classify_regime(l_m, l_alpha);
      const bool heat = l_quantity == "heat" || (l_quantity == "auto" && reg.id == RegimeId::R1);
      const LatticeBudget budget{l_max, common.threads};
      CsvTable table{{"t", "value", "err", "regime", "predicted_exponent"}, {}};
      for (double t : grid) {
        const LatticeSum s = heat ? lattice_heat_content(fam, t, l_eps, budget) : lattice_heat_loss(fam, t, l_eps, budget);
        table.rows.push_back({t, s.estimate.value, s.estimate.error, std::string(to_string(reg.id)), reg.leading_exponent});
      }
      emit_table(common, table);
      return kOk;
    }

    if (*functionals) {
      const BallUnion omega = make_shape(f_shape);
      CsvTable table{{"t", "g_mu", "g_mu_err", "g_nu", "g_nu_err"}, {}};
      for (std::size_t j = 0; j < grid.size(); ++j) {
        const double t = grid[j];
        const FunctionalValue g =
            omega.size() == 1 ? functionals_ball(omega.dim(), omega.ball(0).radius, t, tol * omega.volume())
                              : functionals_mc(omega, t, samples, Stream{seed, static_cast<std::uint32_t>(j)},
                                               common.threads);
        table.rows.push_back({t, g.g_mu.value, g.g_mu.error, g.g_nu.value, g.g_nu.error});
      }
      emit_table(common, table);
      return kOk;
    }

    if (*verify) {
      const Budget budget{samples, tol, sigma_mult, seed, common.threads};
      const TheoremId id = theorem_from_string(theorem);
      if (id == TheoremId::T4) {
        if (v_shape.alpha <= 0.0) throw std::invalid_argument("T4 needs --alpha");
        auto rep = remainder_envelope(v_shape.m, v_shape.a, v_shape.alpha, grid, v_eps,
                                      LatticeBudget{LatticeBudget{}.max_balls, common.threads});
        rep.sigma_mult = sigma_mult;
        return emit_report(common, rep);
      }
      if (id == TheoremId::L2) {
        if (v_shape.alpha <= 0.0) throw std::invalid_argument("L2 needs --alpha");
        const int m = v_shape.m;
        const double a = v_shape.a, alpha = v_shape.alpha;
        VerificationReport rep;
        rep.theorem_id = TheoremId::L2;
        rep.sigma_mult = sigma_mult;
        rep.t_grid = grid;
        for (double t : grid) {
          auto f = [&](double x) { return heat_loss_ball(m, 1.0, std::pow(x, 2.0 * alpha) * t / (a * a), 1e-14).value; };
          auto g = [&](double x) { return std::pow(a, m) * std::pow(x, -m * alpha); };
          const Lemma2Gap gap = lemma2_gap(f, g, l2_terms, 1e-12, 2);
          ReportRow row;
          row.t = t;
          row.label = "|sum f g - int f g| <= sum f(i+1)(g(i)-g(i+1)) + f(N+1)g(N+1)";
          row.lower = -std::numeric_limits<double>::infinity();
          row.mid = gap.lhs;
          row.upper = gap.rhs;
          row.sigma_upper = gap.quad_error;
          row.ratio = gap.lhs / gap.rhs;
          row.pass = gap.holds;
          rep.rows.push_back(row);
        }
        rep.notes.emplace_back("f(x) = F_{B(0;1)}(a^-2 x^{2 alpha} t), g(x) = a^m x^{-m alpha}");
        rep.finalize();
        return emit_report(common, rep);
      }

      const BallUnion omega = make_shape(v_shape);
      switch (id) {
        case TheoremId::T1: return emit_report(common, verify_theorem1(omega, grid, budget));
        case TheoremId::T2: return emit_report(common, verify_theorem2(omega, grid, budget));
        case TheoremId::T3i:
          return emit_report(common, verify_theorem3i(omega, separation_delta(omega, 1.0), grid, budget));
        case TheoremId::T3ii:
          return emit_report(common, verify_decoupling(omega, separation_delta(omega, 1.0), grid, budget));
        case TheoremId::FACTS: {
          std::vector<Estimate> H, F;
          for (std::size_t j = 0; j < grid.size(); ++j) {
            if (omega.size() == 1) {
              const BallHeat b = ball_heat(omega.dim(), omega.ball(0).radius, grid[j], tol * omega.volume());
              H.push_back(b.content);
              F.push_back(b.loss);
            } else {
              const HeatTally tally =
                  heat_tally(omega, grid[j], samples, Stream{seed, static_cast<std::uint32_t>(j)}, common.threads);
              const std::uint64_t in = tally.same_ball + tally.other_ball;
              H.push_back(tally_estimate(omega.volume(), in, tally.samples));
              F.push_back(tally_estimate(omega.volume(), tally.samples - in, tally.samples));
            }
          }
          const auto hp = pairs(grid, H), fp = pairs(grid, F);
          return emit_report(common, verify_basic_facts(hp, std::span(fp), sigma_mult));
        }
        default: break;
      }
    }

    if (*fit) {
      std::optional<double> predicted;
      const auto pts = read_points(fit_in, fit_value, fit_error, tmin, tmax, predicted);
      const PowerLawFit r = fit_power_law(pts);
      nlohmann::ordered_json j;
      j["exponent"] = r.exponent;
      j["constant"] = r.constant;
      j["exponent_stderr"] = r.exponent_stderr;
      j["points"] = pts.size();
      if (predicted) j["predicted_exponent"] = *predicted;
      if (common.stamp) j["generated_at"] = utc_timestamp();
      write_output(common.out, j.dump(2) + "\n");
      return kOk;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "numeric failure: " << e.what() << " (best value " << e.best_value() << ", achieved error "
              << e.achieved_error() << ")\n";
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
  return kUsage;
}

}  // namespace heatlab::cli
