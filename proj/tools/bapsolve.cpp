#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "bapsolve/bap.hpp"
#include "bapsolve/bap_io.hpp"
#include "bapsolve/bench.hpp"
#include "bapsolve/factory.hpp"
#include "bapsolve/hlwb.hpp"
#include "bapsolve/lp_ssepf.hpp"
#include "bapsolve/matrix_market.hpp"
#include "bapsolve/mps.hpp"

namespace fs = std::filesystem;
using namespace bapsolve;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kNotConverged = 2;

struct GenOptions {
  std::string kind = "bap";
  int m = 50;
  int n = 500;
  double density = 0.05;
  std::uint64_t seed = 1;
  int count = 1;
  double anchor_norm = 0.1;
  std::string degeneracy = "nondegenerate";
  int vertices = 6;
  std::string out = ".";
};

struct BapOptions {
  std::vector<std::string> files;
  std::string method = "rnnm-exact";
  double tol = -1.0;
  int max_iter = -1;
  std::string out;
};

struct LpOptions {
  std::vector<std::string> files;
  double tol_gap = 1e-8;
  int max_stones = 100;
  std::string report;
};

// stem, or matrix + sidecar
std::pair<std::string, std::string> instance_paths(const std::vector<std::string>& files) {
  if (files.size() == 2) return {files[0], files[1]};
  if (files.size() != 1) throw InvalidArgument("expected <stem> or <matrix.mtx> <sidecar.vec>");
  std::string stem = files[0];
  if (stem.ends_with(".mtx") || stem.ends_with(".vec")) stem = stem.substr(0, stem.size() - 4);
  return {stem + ".mtx", stem + ".vec"};
}

int run_gen(const GenOptions& o) {
  fs::create_directories(o.out);
  std::vector<ManifestEntry> manifest;
  for (int k = 0; k < o.count; ++k) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(k);
    const std::string name = o.kind + "_" + std::to_string(seed);
    const std::string stem = (fs::path(o.out) / name).string();
    GenSpec spec;
    spec.m = o.m;
    spec.n = o.n;
    spec.density = o.density;
    spec.seed = seed;
    spec.anchor_norm = o.anchor_norm;
    spec.degeneracy = parse_degeneracy(o.degeneracy);
    if (o.kind == "bap") {
      GeneratedBap g = gen_bap_with_known_vertex(spec);
      write_matrix_market_file(stem + ".mtx", g.problem.a());
      Sidecar s;
      s.header["kind"] = "bap";
      s.header["seed"] = std::to_string(seed);
      s.header["degeneracy"] = o.degeneracy;
      s.vectors["b"] = g.problem.b();
      s.vectors["v"] = g.problem.v();
      s.vectors["known_x"] = g.known_x;
      write_sidecar_file(stem + ".vec", s);
    } else if (o.kind == "lp") {
      GeneratedLp g = gen_lp(spec);
      Sidecar s;
      s.header["seed"] = std::to_string(seed);
      s.header["known_optimum"] = format_shortest(g.known_optimum);
      s.vectors["known_x"] = g.known_x;
      save_lp(stem, g.problem, s);
    } else if (o.kind == "triangle") {
      TriangleSpec ts;
      ts.num_vertices = o.vertices;
      const int e = o.vertices * (o.vertices - 1) / 2;
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      Vector xbar(e);
      for (int i = 0; i < e; ++i) xbar[i] = u(rng);
      TriangleBap t = build_triangle_bap(ts, xbar);
      save_bap(stem, t.problem);
    } else {
      throw InvalidArgument("unknown kind: " + o.kind);
    }
    manifest.push_back({seed, o.kind, name});
  }
  std::ofstream mf(fs::path(o.out) / "manifest.txt");
  write_manifest(mf, manifest);
  std::cout << "wrote " << manifest.size() << " instance(s) to " << o.out << '\n';
  return kOk;
}

int run_bap_solve(const BapOptions& o) {
  const auto [mtx, vec] = instance_paths(o.files);
  const BapProblem p = load_bap(mtx, vec);
  BapSolution sol;
  std::string status;
  if (o.method == "hlwb") {
    HlwbConfig cfg;
    if (o.tol > 0) cfg.tol = o.tol;
    if (o.max_iter > 0) cfg.max_sweeps = o.max_iter;
    HlwbResult r = solve_hlwb(p, cfg);
    sol.x = r.x;
    sol.rel_residual = r.rel_residual;
    sol.iterations = static_cast<int>(r.sweeps);
    sol.status = r.status;
  } else if (o.method == "rnnm-exact" || o.method == "rnnm-inexact") {
    RnnmConfig cfg;
    cfg.mode = o.method == "rnnm-exact" ? RnnmMode::exact : RnnmMode::inexact;
    if (o.tol > 0) cfg.tol = o.tol;
    if (o.max_iter > 0) cfg.max_iter = o.max_iter;
    sol = solve_rnnm(p, Vector(), cfg);
  } else {
    throw InvalidArgument("unknown method: " + o.method);
  }
  std::cout << "method " << o.method << " status " << to_string(sol.status) << " iterations "
            << sol.iterations << " rel_residual " << format_sci(sol.rel_residual) << '\n';
  if (!o.out.empty() && o.method != "hlwb") {
    std::ofstream f(o.out);
    if (!f) throw InvalidArgument("cannot write " + o.out);
    write_bap_solution(f, p, sol);
  } else if (!o.out.empty()) {
    Sidecar s;
    s.header["kind"] = "bap-solution";
    s.vectors["x"] = sol.x;
    write_sidecar_file(o.out, s);
  }
  return sol.converged() ? kOk : kNotConverged;
}

int run_lp_solve(const LpOptions& o) {
  SsepfConfig cfg;
  cfg.tol_gap = o.tol_gap;
  cfg.max_stones = o.max_stones;
  LpSolveResult r;
  double objective = 0.0;
  if (o.files.size() == 1 && (o.files[0].ends_with(".mps") || o.files[0].ends_with(".MPS"))) {
    const MpsModel model = parse_mps_file(o.files[0]);
    const StandardForm sf = to_standard_form(model);
    r = solve_lp(sf.lp, cfg);
    objective = sf.original_objective(r.objective());
  } else {
    const auto [mtx, vec] = instance_paths(o.files);
    r = solve_lp(load_lp(mtx, vec), cfg);
    objective = r.objective();
  }
  std::cout << "status " << to_string(r.status) << " stones " << r.stones.size() << " objective "
            << format_sci(objective) << " gap " << format_sci(r.cert.gap()) << '\n';
  if (!r.message.empty()) std::cout << "note " << r.message << '\n';
  if (!o.report.empty()) {
    std::ofstream f(o.report);
    if (!f) throw InvalidArgument("cannot write " + o.report);
    f << r.report() << '\n';
  }
  return r.status == LpSolveStatus::optimal ? kOk : kNotConverged;
}

int run_bench(const std::string& cfg_path, const std::string& out_dir) {
  SuiteConfig cfg = parse_suite_config_file(cfg_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const BenchOutput out = run_benchmark(cfg);
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << '\n';
  int failed = 0;
  for (const auto& r : out.records) failed += r.success ? 0 : 1;
  std::cout << "records " << out.records.size() << " failures " << failed << '\n';
  for (const auto& f : out.files) std::cout << "wrote " << f << '\n';
  return kOk;
}

int run_profile(const std::string& records_path, const std::string& out_dir) {
  std::ifstream in(records_path);
  if (!in) throw InvalidArgument("cannot open " + records_path);
  const auto records = read_records_csv(in);
  const std::string dir =
      out_dir.empty() ? fs::path(records_path).parent_path().string() : out_dir;
  std::vector<std::string> warnings;
  const auto files = write_profiles(records, dir.empty() ? "." : dir, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : files) std::cout << "wrote " << f << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best approximation and LP solvers"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate seeded instances");
  gen_cmd->add_option("--kind", gen.kind, "bap, lp or triangle")
      ->check(CLI::IsMember({"bap", "lp", "triangle"}));
  gen_cmd->add_option("--m", gen.m);
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--density", gen.density, "nonzero fraction per column");
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--count", gen.count, "instances with seeds seed, seed+1, ...");
  gen_cmd->add_option("--anchor-norm", gen.anchor_norm);
  gen_cmd->add_option("--degeneracy", gen.degeneracy)
      ->check(CLI::IsMember({"nondegenerate", "degenerate", "non_vertex"}));
  gen_cmd->add_option("--vertices", gen.vertices, "graph size for triangle instances");
  gen_cmd->add_option("--out", gen.out, "output directory");

  BapOptions bap;
  auto* bap_cmd = app.add_subcommand("bap", "best approximation problems");
  bap_cmd->require_subcommand(1);
  auto* bap_solve = bap_cmd->add_subcommand("solve", "project the anchor onto the polyhedron");
  bap_solve->add_option("files", bap.files, "<stem> or <matrix.mtx> <sidecar.vec>")->required();
  bap_solve->add_option("--method", bap.method)
      ->check(CLI::IsMember({"rnnm-exact", "rnnm-inexact", "hlwb"}));
  bap_solve->add_option("--tol", bap.tol);
  bap_solve->add_option("--max-iter", bap.max_iter, "iterations, or sweeps for hlwb");
  bap_solve->add_option("--out", bap.out, "solution file");

  LpOptions lp;
  auto* lp_cmd = app.add_subcommand("lp", "linear programs");
  lp_cmd->require_subcommand(1);
  auto* lp_solve = lp_cmd->add_subcommand("solve", "solve by stepping stones");
  lp_solve->add_option("files", lp.files, "<file.mps>, <stem> or <matrix.mtx> <sidecar.vec>")
      ->required();
  lp_solve->add_option("--tol-gap", lp.tol_gap);
  lp_solve->add_option("--max-stones", lp.max_stones);
  lp_solve->add_option("--report", lp.report, "JSON report path");

  std::string suite, bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "run a benchmark suite");
  bench_cmd->add_option("suite", suite)->required();
  bench_cmd->add_option("--output-dir", bench_out);

  std::string records, profile_out;
  auto* profile_cmd = app.add_subcommand("profile", "performance profiles from records.csv");
  profile_cmd->add_option("records", records)->required();
  profile_cmd->add_option("--output-dir", profile_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*bap_solve) return run_bap_solve(bap);
    if (*lp_solve) return run_lp_solve(lp);
    if (*bench_cmd) return run_bench(suite, bench_out);
    if (*profile_cmd) return run_profile(records, profile_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
