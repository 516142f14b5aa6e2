#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bapsolve/bap.hpp"
#include "bapsolve/bench.hpp"
#include "bapsolve/factory.hpp"
#include "bapsolve/hlwb.hpp"
#include "bapsolve/lp_ssepf.hpp"
#include "bapsolve/mps.hpp"
#include "bapsolve/perf_profile.hpp"

namespace py = pybind11;
using namespace bapsolve;

namespace {

BapProblem make_problem(SparseMatrix a, Vector b, Vector v, const std::vector<bool>& free) {
  std::vector<Sign> signs;
  if (!free.empty()) {
    signs.reserve(free.size());
    for (bool f : free) signs.push_back(f ? Sign::free : Sign::nonnegative);
  }
  return BapProblem(std::move(a), std::move(b), std::move(v), std::move(signs));
}

GenSpec make_spec(int m, int n, double density, std::uint64_t seed, double anchor_norm,
                  const std::string& degeneracy) {
  GenSpec s;
  s.m = m;
  s.n = n;
  s.density = density;
  s.seed = seed;
  s.anchor_norm = anchor_norm;
  s.degeneracy = parse_degeneracy(degeneracy);
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Best approximation and LP solvers";

  auto base = py::register_exception<Error>(m, "BapsolveError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("converged", SolveStatus::converged)
      .value("max_iter", SolveStatus::max_iter)
      .value("stalled", SolveStatus::stalled)
      .value("time_limit", SolveStatus::time_limit);

  py::class_<BapProblem>(m, "BapProblem")
      .def(py::init(&make_problem), py::arg("a"), py::arg("b"), py::arg("v"),
           py::arg("free") = std::vector<bool>{},
           "min 0.5*||x - v||^2 s.t. Ax = b, x >= 0 except on free coordinates. "
           "`a` is a scipy.sparse matrix.")
      .def_property_readonly("m", &BapProblem::m)
      .def_property_readonly("n", &BapProblem::n)
      .def_property_readonly("a", &BapProblem::a)
      .def_property_readonly("b", &BapProblem::b)
      .def_property_readonly("v", &BapProblem::v);

  py::class_<RnnmConfig>(m, "RnnmConfig")
      .def(py::init<>())
      .def_readwrite("tol", &RnnmConfig::tol)
      .def_readwrite("max_iter", &RnnmConfig::max_iter)
      .def_property(
          "inexact", [](const RnnmConfig& c) { return c.mode == RnnmMode::inexact; },
          [](RnnmConfig& c, bool v) { c.mode = v ? RnnmMode::inexact : RnnmMode::exact; })
      .def_readwrite("delta", &RnnmConfig::delta)
      .def_readwrite("nu", &RnnmConfig::nu)
      .def_readwrite("theta", &RnnmConfig::theta)
      .def_readwrite("damping", &RnnmConfig::damping)
      .def_readwrite("retry", &RnnmConfig::retry)
      .def_readwrite("time_limit", &RnnmConfig::time_limit);

  py::class_<BapSolution>(m, "BapSolution")
      .def_readonly("x", &BapSolution::x)
      .def_readonly("y", &BapSolution::y)
      .def_readonly("z", &BapSolution::z)
      .def_readonly("rel_residual", &BapSolution::rel_residual)
      .def_readonly("iterations", &BapSolution::iterations)
      .def_readonly("status", &BapSolution::status)
      .def_readonly("retried", &BapSolution::retried)
      .def_property_readonly("converged", &BapSolution::converged);

  py::class_<KktReport>(m, "KktReport")
      .def_readonly("primal_feas", &KktReport::primal_feas)
      .def_readonly("dual_feas", &KktReport::dual_feas)
      .def_readonly("comp_slack", &KktReport::comp_slack);

  m.def("residual", &residual, py::arg("problem"), py::arg("y"));
  m.def(
      "solve_rnnm",
      [](const BapProblem& p, const Vector& y0, const RnnmConfig& cfg) {
        py::gil_scoped_release nogil;
        return solve_rnnm(p, y0, cfg);
      },
      py::arg("problem"), py::arg("y0") = Vector(), py::arg("config") = RnnmConfig());
  m.def("kkt_report", &kkt_report, py::arg("problem"), py::arg("solution"));

  py::class_<HlwbResult>(m, "HlwbResult")
      .def_readonly("x", &HlwbResult::x)
      .def_readonly("rel_residual", &HlwbResult::rel_residual)
      .def_readonly("sweeps", &HlwbResult::sweeps)
      .def_readonly("status", &HlwbResult::status)
      .def_property_readonly("converged", &HlwbResult::converged);
  m.def(
      "solve_hlwb",
      [](const BapProblem& p, double tol, long max_sweeps) {
        HlwbConfig cfg;
        cfg.tol = tol;
        cfg.max_sweeps = max_sweeps;
        py::gil_scoped_release nogil;
        return solve_hlwb(p, cfg);
      },
      py::arg("problem"), py::arg("tol") = 1e-3, py::arg("max_sweeps") = 2000);

  py::class_<LpProblem>(m, "LpProblem")
      .def(py::init([](SparseMatrix a, Vector b, Vector c) {
             LpProblem lp{std::move(a), std::move(b), std::move(c)};
             lp.validate();
             return lp;
           }),
           py::arg("a"), py::arg("b"), py::arg("c"), "max c^T x s.t. Ax = b, x >= 0")
      .def_readonly("a", &LpProblem::a)
      .def_readonly("b", &LpProblem::b)
      .def_readonly("c", &LpProblem::c)
      .def_property_readonly("m", &LpProblem::m)
      .def_property_readonly("n", &LpProblem::n);

  py::class_<LpSolveResult>(m, "LpSolveResult")
      .def_property_readonly("status", [](const LpSolveResult& r) { return to_string(r.status); })
      .def_property_readonly("objective", &LpSolveResult::objective)
      .def_property_readonly("lower", [](const LpSolveResult& r) { return r.cert.lower; })
      .def_property_readonly("upper", [](const LpSolveResult& r) { return r.cert.upper; })
      .def_property_readonly("gap", [](const LpSolveResult& r) { return r.cert.gap(); })
      .def_property_readonly("x", [](const LpSolveResult& r) { return r.cert.x; })
      .def_property_readonly("y", [](const LpSolveResult& r) { return r.cert.y_lp; })
      .def_property_readonly("stones", [](const LpSolveResult& r) { return r.stones.size(); })
      .def("report", &LpSolveResult::report);
  m.def(
      "solve_lp",
      [](const LpProblem& lp, double tol_gap, int max_stones) {
        SsepfConfig cfg;
        cfg.tol_gap = tol_gap;
        cfg.max_stones = max_stones;
        py::gil_scoped_release nogil;
        return solve_lp(lp, cfg);
      },
      py::arg("lp"), py::arg("tol_gap") = 1e-8, py::arg("max_stones") = 100);

  py::class_<StandardForm>(m, "StandardForm")
      .def_readonly("lp", &StandardForm::lp)
      .def("original_x", &StandardForm::original_x)
      .def("original_objective", &StandardForm::original_objective);
  m.def(
      "read_mps", [](const std::string& path) { return to_standard_form(parse_mps_file(path)); },
      py::arg("path"), "Parse an MPS file and convert it to equality form.");

  py::class_<GeneratedBap>(m, "GeneratedBap")
      .def_readonly("problem", &GeneratedBap::problem)
      .def_readonly("known_x", &GeneratedBap::known_x);
  m.def(
      "gen_bap",
      [](int mm, int n, double density, std::uint64_t seed, double anchor_norm,
         const std::string& degeneracy) {
        return gen_bap_with_known_vertex(make_spec(mm, n, density, seed, anchor_norm, degeneracy));
      },
      py::arg("m"), py::arg("n"), py::arg("density") = 0.1, py::arg("seed") = 1,
      py::arg("anchor_norm") = 0.1, py::arg("degeneracy") = "nondegenerate");

  py::class_<GeneratedLp>(m, "GeneratedLp")
      .def_readonly("problem", &GeneratedLp::problem)
      .def_readonly("known_optimum", &GeneratedLp::known_optimum)
      .def_readonly("known_x", &GeneratedLp::known_x);
  m.def(
      "gen_lp",
      [](int mm, int n, double density, std::uint64_t seed, const std::string& degeneracy) {
        return gen_lp(make_spec(mm, n, density, seed, 0.1, degeneracy));
      },
      py::arg("m"), py::arg("n"), py::arg("density") = 0.1, py::arg("seed") = 1,
      py::arg("degeneracy") = "nondegenerate");

  m.def(
      "performance_ratio",
      [](const TimingTable& t) {
        const RatioTable r = performance_ratio(t);
        return py::make_tuple(r.ratios, r.kept, r.dropped);
      },
      py::arg("times"), "Returns (ratios, kept rows, dropped rows). Use inf for failures.");
  m.def(
      "performance_profile",
      [](const TimingTable& ratios, const std::vector<std::string>& solvers, int grid_points) {
        const PerfProfile p = performance_profile(ratios, solvers, grid_points);
        return py::make_tuple(p.tau, p.rho);
      },
      py::arg("ratios"), py::arg("solvers"), py::arg("grid_points") = 50,
      "Returns (tau, rho) with rho[s][k] at tau[k].");
  m.def(
      "run_benchmark",
      [](const std::string& config_path, const std::string& output_dir) {
        SuiteConfig cfg = parse_suite_config_file(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        py::gil_scoped_release nogil;
        return run_benchmark(cfg).files;
      },
      py::arg("config"), py::arg("output_dir") = "", "Runs a suite file; returns the files written.");
}
