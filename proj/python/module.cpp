#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heatlab/asymptotics.hpp"
#include "heatlab/errors.hpp"
#include "heatlab/estimators.hpp"
#include "heatlab/functionals.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/kernel.hpp"
#include "heatlab/report_io.hpp"
#include "heatlab/series.hpp"
#include "heatlab/tgrid.hpp"
#include "heatlab/theorems.hpp"

namespace py = pybind11;
using namespace heatlab;

namespace {

py::dict report_dict(const VerificationReport& r) {
  py::list rows;
  for (const auto& row : r.rows) {
    py::dict d;
    d["t"] = row.t;
    d["lower"] = row.lower;
    d["mid"] = row.mid;
    d["upper"] = row.upper;
    d["sigma"] = row.sigma();
    d["ratio"] = row.ratio;
    d["label"] = row.label;
    d["pass"] = row.pass;
    rows.append(d);
  }
  py::dict out;
  out["theorem_id"] = std::string(to_string(r.theorem_id));
  out["grid"] = r.t_grid;
  out["rows"] = rows;
  out["passed"] = r.passed;
  out["notes"] = r.notes;
  return out;
}

Budget make_budget(std::uint64_t samples, double tol, std::uint64_t seed, unsigned threads) {
  return Budget{samples, tol, 3.0, seed, threads};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "heatlab native core";

  static py::exception<ConvergenceError> conv_error(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      py::set_error(conv_error, e.what());
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("error", &Estimate::error)
      .def_property_readonly("kind", [](const Estimate& e) { return std::string(to_string(e.kind)); })
      .def_readonly("budget", &Estimate::budget)
      .def("__repr__", [](const Estimate& e) {
        return "Estimate(" + std::to_string(e.value) + " +- " + std::to_string(e.error) + ")";
      });

  py::class_<Ball>(m, "Ball")
      .def(py::init([](std::vector<double> c, double r) { return Ball{std::move(c), r}; }), py::arg("center"),
           py::arg("radius"))
      .def_readonly("center", &Ball::center)
      .def_readonly("radius", &Ball::radius);

  py::class_<BallUnion>(m, "BallUnion")
      .def(py::init<int, std::vector<Ball>, std::string>(), py::arg("dim"), py::arg("balls"), py::arg("label") = "")
      .def_property_readonly("dim", &BallUnion::dim)
      .def_property_readonly("volume", &BallUnion::volume)
      .def_property_readonly("perimeter", &BallUnion::perimeter)
      .def("__len__", &BallUnion::size)
      .def("contains", py::overload_cast<const Point&>(&BallUnion::contains, py::const_));

  py::class_<LatticeFamily>(m, "LatticeFamily")
      .def(py::init(&make_lattice_family), py::arg("m"), py::arg("a"), py::arg("alpha"))
      .def_readonly("m", &LatticeFamily::m)
      .def_readonly("a", &LatticeFamily::a)
      .def_readonly("alpha", &LatticeFamily::alpha)
      .def("radius", &LatticeFamily::radius)
      .def("window", &lattice_window, py::arg("count"));

  m.def("ball_volume", &ball_volume, py::arg("m"), py::arg("r"));
  m.def("ball_perimeter", &ball_perimeter, py::arg("m"), py::arg("r"));
  m.def("lens_volume", &lens_volume, py::arg("m"), py::arg("r1"), py::arg("r2"), py::arg("s"));
  m.def("separation_delta", [](const BallUnion& o, double spacing) { return separation_delta(o, spacing).delta; },
        py::arg("omega"), py::arg("lattice_spacing") = 1.0);

  m.def(
      "liyau_constant",
      [](int dim) {
        const auto c = liyau_constant(dim);
        py::dict d;
        d["m"] = c.dim;
        d["C"] = c.C;
        d["K1"] = c.K1;
        d["K2"] = c.K2;
        d["L1"] = c.L1;
        d["L2"] = c.L2;
        return d;
      },
      py::arg("m"));
  m.def("single_ball_remainder_constant", &single_ball_remainder_constant, py::arg("m"));

  m.def("heat_content_ball", &heat_content_ball, py::arg("m"), py::arg("r"), py::arg("t"), py::arg("tol") = 1e-12);
  m.def("heat_loss_ball", &heat_loss_ball, py::arg("m"), py::arg("r"), py::arg("t"), py::arg("tol") = 1e-12);
  m.def(
      "heat_content_mc",
      [](const BallUnion& o, double t, std::uint64_t n, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return heat_content_mc(o, t, n, Stream{seed, 0}, threads);
      },
      py::arg("omega"), py::arg("t"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "heat_loss_mc",
      [](const BallUnion& o, double t, std::uint64_t n, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return heat_loss_mc(o, t, n, Stream{seed, 0}, threads);
      },
      py::arg("omega"), py::arg("t"), py::arg("n"), py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "functionals_ball",
      [](int dim, double r, double t, double tol) {
        const auto v = functionals_ball(dim, r, t, tol);
        return py::make_tuple(v.g_mu, v.g_nu);
      },
      py::arg("m"), py::arg("r"), py::arg("t"), py::arg("tol") = 1e-12);

  m.def("c_constant", &c_constant, py::arg("m"), py::arg("alpha"), py::arg("a"), py::arg("tol") = 1e-12);
  m.def("d_constant", &d_constant, py::arg("m"), py::arg("alpha"), py::arg("a"), py::arg("tol") = 1e-12);
  m.def(
      "classify_regime",
      [](int dim, double alpha) {
        const Regime r = classify_regime(dim, alpha);
        return py::make_tuple(std::string(to_string(r.id)), r.leading_exponent);
      },
      py::arg("m"), py::arg("alpha"));
  m.def(
      "lattice_heat_content",
      [](const LatticeFamily& f, double t, double eps) { return lattice_heat_content(f, t, eps).estimate; },
      py::arg("family"), py::arg("t"), py::arg("eps"));
  m.def(
      "lattice_heat_loss",
      [](const LatticeFamily& f, double t, double eps) { return lattice_heat_loss(f, t, eps).estimate; },
      py::arg("family"), py::arg("t"), py::arg("eps"));
  m.def(
      "fit_power_law",
      [](const std::vector<double>& t, const std::vector<double>& v, std::optional<std::vector<double>> err) {
        if (t.size() != v.size() || (err && err->size() != t.size()))
          throw std::invalid_argument("fit_power_law: length mismatch");
        std::vector<PowerLawPoint> pts;
        for (std::size_t i = 0; i < t.size(); ++i) pts.push_back({t[i], v[i], err ? (*err)[i] : 0.0});
        const PowerLawFit f = fit_power_law(pts);
        return py::make_tuple(f.exponent, f.constant, f.exponent_stderr);
      },
      py::arg("t"), py::arg("values"), py::arg("errors") = py::none());
  m.def("zeta", &zeta, py::arg("s"));
  m.def("parse_t_grid", &parse_t_grid, py::arg("spec"));

  m.def(
      "verify_theorem1",
      [](const BallUnion& o, const std::vector<double>& grid, std::uint64_t samples, std::uint64_t seed) {
        return report_dict(verify_theorem1(o, grid, make_budget(samples, 1e-12, seed, 1)));
      },
      py::arg("omega"), py::arg("t_grid"), py::arg("samples") = 100000, py::arg("seed") = 0);
  m.def(
      "verify_theorem2",
      [](const BallUnion& o, const std::vector<double>& grid, std::uint64_t samples, std::uint64_t seed) {
        return report_dict(verify_theorem2(o, grid, make_budget(samples, 1e-12, seed, 1)));
      },
      py::arg("omega"), py::arg("t_grid"), py::arg("samples") = 100000, py::arg("seed") = 0);
  m.def(
      "verify_decoupling",
      [](const BallUnion& o, const std::vector<double>& grid, std::uint64_t samples, std::uint64_t seed) {
        return report_dict(verify_decoupling(o, separation_delta(o, 1.0), grid, make_budget(samples, 1e-12, seed, 1)));
      },
      py::arg("window"), py::arg("t_grid"), py::arg("samples") = 100000, py::arg("seed") = 0);
}
