// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bapsolve/bap.hpp"
#include "bapsolve/bap_io.hpp"
#include "bapsolve/bench.hpp"
#include "bapsolve/factory.hpp"
#include "bapsolve/hlwb.hpp"
#include "bapsolve/lp_ssepf.hpp"
#include "bapsolve/matrix_market.hpp"
#include "bapsolve/mps.hpp"
#include "bapsolve/perf_profile.hpp"
#include "bapsolve/sparse_linalg.hpp"
#include "support/oracles.hpp"

using namespace bapsolve;
namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// --- criterion 1 instances, shared with 2, 4 and 5

GenSpec bap_spec(int i) {
  static const int ms[] = {50, 100, 200};
  static const int ns[] = {500, 1000, 2000};
  GenSpec s;
  s.m = ms[i % 3];
  s.n = ns[(i / 3) % 3];
  s.density = 0.01 + 0.01 * (i % 10);
  s.seed = 1000 + static_cast<std::uint64_t>(i);
  return s;
}

std::vector<GeneratedBap>& bap_instances() {
  static std::vector<GeneratedBap> v = [] {
    std::vector<GeneratedBap> out;
    for (int i = 0; i < 200; ++i) out.push_back(gen_bap_with_known_vertex(bap_spec(i)));
    return out;
  }();
  return v;
}

double rel_err(const Vector& x, const Vector& ref) { return (x - ref).norm() / (1.0 + ref.norm()); }

// KKT data gathered while running criterion 1
struct KktStats {
  long iterates = 0;
  double worst_dual = 0.0;
  double worst_comp = 0.0;
  int converged = 0;
  int primal_ok = 0;
  double worst_primal_ratio = 0.0;
};
KktStats g_kkt;

Outcome criterion1() {
  int converged = 0, x_bad = 0;
  double worst_x = 0.0;
  for (const GeneratedBap& g : bap_instances()) {
    const BapProblem& p = g.problem;
    RnnmConfig cfg;
    cfg.observer = [&p](int, const Vector& y, const Vector&) {
      const BapSolution c = certificate_from_multiplier(p, y);
      const KktReport k = kkt_report(p, c);
      ++g_kkt.iterates;
      g_kkt.worst_dual = std::max(g_kkt.worst_dual, k.dual_feas);
      g_kkt.worst_comp = std::max(g_kkt.worst_comp, k.comp_slack);
    };
    const BapSolution s = solve_rnnm(p, Vector(), cfg);
    if (s.converged()) {
      ++g_kkt.converged;
      const double tol_eff = s.retried ? 10.0 * cfg.tol : cfg.tol;
      const double ratio = (p.a() * s.x - p.b()).norm() / (tol_eff * (1.0 + p.b().norm()));
      g_kkt.worst_primal_ratio = std::max(g_kkt.worst_primal_ratio, ratio);
      g_kkt.primal_ok += ratio <= 1.0 ? 1 : 0;
    }
    if (s.converged() && s.iterations <= 2000 && s.rel_residual <= 1e-12) {
      ++converged;
      const double e = rel_err(s.x, g.known_x);
      worst_x = std::max(worst_x, e);
      x_bad += e <= 1e-8 ? 0 : 1;
    }
  }
  const int total = static_cast<int>(bap_instances().size());
  Outcome o;
  o.pass = converged * 100 >= 95 * total && x_bad == 0;
  o.detail = std::to_string(converged) + "/" + std::to_string(total) +
             " reached 1e-12, worst x error " + fmt("%.2e", worst_x);
  return o;
}

Outcome criterion2() {
  Outcome o;
  o.pass = g_kkt.iterates > 0 && g_kkt.worst_dual == 0.0 && g_kkt.worst_comp == 0.0 &&
           g_kkt.primal_ok == g_kkt.converged;
  o.detail = std::to_string(g_kkt.iterates) + " iterates, dual " + fmt("%.1e", g_kkt.worst_dual) +
             " comp " + fmt("%.1e", g_kkt.worst_comp) + ", primal/tol " +
             fmt("%.2f", g_kkt.worst_primal_ratio);
  return o;
}

double merit(const BapProblem& p, const Vector& y) { return 0.5 * residual(p, y).squaredNorm(); }

Outcome criterion3() {
  std::mt19937_64 rng(303);
  const double h = 1e-6;
  int tested = 0, bad = 0;
  double worst = -kInf;
  for (std::uint64_t seed = 1; tested < 50 && seed < 2000; ++seed) {
    GenSpec spec;
    spec.m = 20;
    spec.n = 100;
    spec.density = 0.2;
    spec.seed = seed;
    const BapProblem p = gen_bap_with_known_vertex(spec).problem;
    const Vector y = oracle::random_dense(p.m(), 1, rng).col(0) * 0.1;
    const Vector f = residual(p, y);
    if (f.norm() == 0.0) continue;
    const IndexSets sets = classify_indices(p, y);
    const double rel = f.norm() / (1.0 + p.b().norm());
    RnnmConfig cfg;
    const double lam = regularization_lambda(cfg, rel, 1.0, p.v().norm());
    const Vector d = cholesky_shifted(generalized_jacobian(p, sets), lam).solve(-f);
    // both ends of the difference must stay in the same linear piece
    const Vector t = shifted_anchor(p, y);
    const Vector td = p.a().transpose() * d;
    bool smooth = true;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      if (std::abs(t[i]) <= 2.0 * h * std::abs(td[i]) + 1e-12) smooth = false;
    }
    if (!smooth) continue;
    const DenseMatrix j =
        oracle::fd_jacobian([&p](const Vector& u) { return residual(p, u); }, y, h);
    const double grad = (j.transpose() * f).norm();
    const double deriv = (merit(p, y + h * d) - merit(p, y - h * d)) / (2.0 * h);
    const double scaled = deriv / grad;
    worst = std::max(worst, scaled);
    bad += deriv < -1e-12 * grad ? 0 : 1;
    ++tested;
  }
  Outcome o;
  o.pass = tested == 50 && bad == 0;
  o.detail = std::to_string(tested) + " points, largest derivative/|grad| " + fmt("%.3e", worst);
  return o;
}

Outcome criterion4() {
  int ok = 0, total = 0;
  double worst = 0.0;
  long max_sweeps = 0;
  for (const GeneratedBap& g : bap_instances()) {
    if (g.problem.m() > 500) continue;
    ++total;
    const HlwbResult r = solve_hlwb(g.problem);
    worst = std::max(worst, r.rel_residual);
    max_sweeps = std::max(max_sweeps, r.sweeps);
    ok += r.rel_residual <= 1e-3 && r.sweeps <= 2000 ? 1 : 0;
  }
  Outcome o;
  o.pass = ok == total;
  o.detail = std::to_string(ok) + "/" + std::to_string(total) + " within 1e-3, worst " +
             fmt("%.2e", worst) + ", most sweeps " + std::to_string(max_sweeps);
  return o;
}

Outcome criterion5() {
  int ok = 0, total = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const BapProblem& p = bap_instances()[static_cast<std::size_t>(i)].problem;
    RnnmConfig ex;
    RnnmConfig in;
    in.mode = RnnmMode::inexact;
    in.delta = 1.0;
    in.nu = 2.0;
    in.theta = 0.5;
    in.regularization = RegularizationRule::algorithm;
    const BapSolution a = solve_rnnm(p, Vector(), ex);
    const BapSolution b = solve_rnnm(p, Vector(), in);
    ++total;
    const double d = (a.x - b.x).norm();
    worst = std::max(worst, d);
    ok += a.converged() && b.converged() && d <= 1e-8 ? 1 : 0;
  }
  Outcome o;
  o.pass = ok == total;
  o.detail = std::to_string(ok) + "/" + std::to_string(total) + " agree, worst |dx| " +
             fmt("%.2e", worst);
  return o;
}

// --- criterion 6

SsepfState state_at(const LpProblem& lp, double r) {
  const BapSolution s = solve_rnnm(scaled_subproblem(lp, r), Vector());
  if (!s.converged()) throw InvalidState("subproblem did not converge");
  SsepfState st;
  st.r = r;
  st.w = s.x;
  st.y = s.y;
  st.z = s.z;
  st.bases = classify_bases(s.x, s.z, basis_zero_tol(s.x, s.z));
  return st;
}

bool same_bases(const Bases& a, const Bases& b) {
  return a.basic == b.basic && a.nonbasic == b.nonbasic && a.zero == b.zero;
}

// The oracle classifies with a much tighter zero threshold than the solver so
// the located break is not shifted by the threshold itself.
Bases oracle_bases(const SsepfState& st) {
  return classify_bases(st.w, st.z, 1e-3 * basis_zero_tol(st.w, st.z));
}

// First R > r0 where the partition leaves `ref`, or +inf if it stays up to r_max.
double brute_force_break(const LpProblem& lp, const Bases& ref, double r0, double r_max) {
  const double q = 1.05;
  double lo = r0;
  double hi = kInf;
  for (double r = r0 * q; r <= r_max; r *= q) {
    if (!same_bases(oracle_bases(state_at(lp, r)), ref)) {
      hi = r;
      break;
    }
    lo = r;
  }
  if (!std::isfinite(hi)) return kInf;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (same_bases(oracle_bases(state_at(lp, mid)), ref)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Outcome criterion6() {
  int lps = 0, stones = 0, bad = 0, finals = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; lps < 30 && seed < 400; ++seed) {
    GenSpec spec;
    spec.m = 2 + static_cast<int>(seed % 4);
    spec.n = std::min(12, 2 * spec.m + 2 + static_cast<int>(seed % 3));
    spec.density = 0.6;
    spec.seed = 600 + seed;
    const LpProblem lp = gen_lp(spec).problem;
    double r = 1e-2 * initial_radius(lp);
    int local_stones = 0, local_bad = 0;
    bool degenerate = false, finished = false;
    double local_worst = 0.0;
    try {
      for (int guard = 0; guard < 50; ++guard) {
        const SsepfState st = state_at(lp, r);
        if (!st.bases.zero.empty()) {
          degenerate = true;
          break;
        }
        const StoneStep step = next_stone(lp, st);
        const double limit = std::isfinite(step.r_next) ? 10.0 * step.r_next : 1e6 * r;
        const double brute = brute_force_break(lp, oracle_bases(st), r, std::max(limit, 1e6 * r));
        if (!std::isfinite(step.r_next)) {
          local_bad += std::isfinite(brute) ? 1 : 0;
          finished = true;
          break;
        }
        const double e = std::isfinite(brute) ? std::abs(brute - step.r_next) / step.r_next : kInf;
        local_worst = std::max(local_worst, e);
        local_bad += e <= 1e-6 ? 0 : 1;
        ++local_stones;
        r = step.r_next * (1.0 + 1e-6);
      }
    } catch (const Error&) {
      degenerate = true;
    }
    if (degenerate || !finished) continue;
    ++lps;
    ++finals;
    stones += local_stones;
    bad += local_bad;
    worst = std::max(worst, local_worst);
  }
  Outcome o;
  o.pass = lps == 30 && bad == 0;
  o.detail = std::to_string(lps) + " LPs, " + std::to_string(stones) + " finite stones, " +
             std::to_string(finals) + " final intervals, worst rel " + fmt("%.2e", worst);
  return o;
}

// --- criteria 7 and 8

struct DualityStats {
  long stones = 0;
  long order_bad = 0;
  long tight = 0;
  long tight_bad = 0;
  double worst_tight_gap = 0.0;
};
DualityStats g_dual;

void record_duality(const LpSolveResult& r) {
  for (const StoneRecord& s : r.stones) {
    if (!std::isfinite(s.upper)) continue;
    ++g_dual.stones;
    g_dual.order_bad += s.lower <= s.upper + 1e-12 * (1.0 + std::abs(s.upper)) ? 0 : 1;
    if (s.dual_zb <= 1e-12) {
      ++g_dual.tight;
      g_dual.worst_tight_gap = std::max(g_dual.worst_tight_gap, s.gap);
      g_dual.tight_bad += s.gap <= 1e-10 ? 0 : 1;
    }
  }
}

Outcome criterion7() {
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<int> md(2, 50);
  int ok = 0;
  std::vector<int> counts;
  double worst_obj = 0.0, worst_gap = 0.0;
  for (int i = 0; i < 100; ++i) {
    GenSpec spec;
    spec.m = md(rng);
    std::uniform_int_distribution<int> nd(spec.m + 2, std::min(200, 4 * spec.m + 10));
    spec.n = i < 20 ? std::min(20, spec.m + 6) : nd(rng);
    if (i < 20) spec.m = std::min(spec.m, 8);
    spec.density = 0.3;
    spec.seed = 7000 + static_cast<std::uint64_t>(i);
    const LpProblem lp = gen_lp(spec).problem;
    const LpSolveResult r = solve_lp(lp);
    record_duality(r);
    const LpOracleResult ref =
        lp.n() <= 20 ? oracle_lp_vertex_enumeration(lp) : reference_simplex(lp);
    const double e = std::abs(r.objective() - ref.value) / (1.0 + std::abs(ref.value));
    worst_obj = std::max(worst_obj, e);
    worst_gap = std::max(worst_gap, r.cert.gap());
    ok += ref.status == LpStatus::optimal && r.cert.gap() <= 1e-8 && e <= 1e-7 ? 1 : 0;
    counts.push_back(static_cast<int>(r.stones.size()));
  }
  std::vector<int> sorted = counts;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[49] + sorted[50]);
  int hist[4] = {0, 0, 0, 0};
  for (int c : counts) ++hist[c <= 1 ? 0 : c <= 3 ? 1 : c <= 10 ? 2 : 3];
  Outcome o;
  o.pass = ok == 100;
  o.detail = std::to_string(ok) + "/100 solved, worst gap " + fmt("%.1e", worst_gap) +
             " obj err " + fmt("%.1e", worst_obj) + "; stones median " + fmt("%.1f", median) +
             " (1:" + std::to_string(hist[0]) + " 2-3:" + std::to_string(hist[1]) +
             " 4-10:" + std::to_string(hist[2]) + " >10:" + std::to_string(hist[3]) + ")" +
             (median <= 3.0 ? ", soft median target met" : ", soft median target (<=3) not met");
  return o;
}

Outcome criterion8() {
  Outcome o;
  o.pass = g_dual.stones > 0 && g_dual.order_bad == 0 && g_dual.tight > 0 && g_dual.tight_bad == 0;
  o.detail = std::to_string(g_dual.stones) + " stones, " + std::to_string(g_dual.order_bad) +
             " order violations, " + std::to_string(g_dual.tight) + " with z_B = 0, worst gap " +
             fmt("%.1e", g_dual.worst_tight_gap);
  return o;
}

Outcome criterion9() {
  const MpsModel model = parse_mps_file(std::string(BAPSOLVE_TEST_DATA) + "/afiro.mps");
  const StandardForm sf = to_standard_form(model);
  const LpSolveResult r = solve_lp(sf.lp);
  record_duality(r);
  const LpOracleResult ref = reference_simplex(sf.lp);
  const double obj = sf.original_objective(r.objective());
  const double ref_obj = sf.original_objective(ref.value);
  const double e = std::abs(obj - ref_obj) / (1.0 + std::abs(ref_obj));
  Outcome o;
  o.pass = r.cert.gap() <= 1e-8 && ref.status == LpStatus::optimal && e <= 1e-6;
  o.detail = "objective " + fmt("%.6e", obj) + " reference " + fmt("%.6e", ref_obj) + ", gap " +
             fmt("%.1e", r.cert.gap()) + ", " + std::to_string(r.stones.size()) + " stones";
  return o;
}

Outcome criterion10() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int ok = 0, total = 0;
  double worst = 0.0;
  for (int i = 0; total < 20 && i < 200; ++i) {
    TriangleSpec spec;
    spec.num_vertices = 5 + i % 8;
    for (int a = 0; a < spec.num_vertices; ++a) {
      for (int b = a + 1; b < spec.num_vertices; ++b) {
        if (u(rng) < 0.6) spec.edges.emplace_back(a, b);
      }
    }
    // keep the dense oracle cheap: only the first 30 triangles of the graph
    if (spec.edges.empty()) continue;
    const TriangleBap all =
        build_triangle_bap(spec, Vector::Zero(static_cast<Eigen::Index>(spec.edges.size())));
    spec.triples = all.triples;
    if (spec.triples.size() > 30) spec.triples.resize(30);
    if (spec.triples.empty()) continue;
    Vector xbar(static_cast<Eigen::Index>(spec.edges.size()));
    for (Eigen::Index k = 0; k < xbar.size(); ++k) xbar[k] = u(rng);
    const TriangleBap tb = build_triangle_bap(spec, xbar);
    const BapSolution s = solve_rnnm(tb.problem, Vector());
    const Vector qp = oracle::active_set_projection(DenseMatrix(tb.problem.a()), tb.problem.b(),
                                                    tb.problem.v());
    ++total;
    if (!s.converged() || qp.size() != s.x.size()) continue;
    const double d = (s.x - qp).norm();
    worst = std::max(worst, d);
    ok += d <= 1e-8 ? 1 : 0;
  }
  Outcome o;
  o.pass = total == 20 && ok == total;
  o.detail = std::to_string(ok) + "/" + std::to_string(total) + " match, worst " + fmt("%.2e", worst);
  return o;
}

Outcome criterion11() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 8);
  long checks = 0, bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int np = dim(rng), ns = dim(rng);
    TimingTable t(static_cast<std::size_t>(np), std::vector<double>(static_cast<std::size_t>(ns)));
    for (auto& row : t) {
      for (auto& x : row) {
        const double z = u(rng);
        x = z < 0.15 ? kInf : z < 0.2 ? std::nan("") : std::exp(5.0 * u(rng));
      }
    }
    // naive ratios: failures (inf or nan) become inf, all-failure rows dropped
    TimingTable naive;
    for (const auto& row : t) {
      double best = kInf;
      for (double x : row) {
        if (std::isfinite(x)) best = std::min(best, x);
      }
      if (!std::isfinite(best)) continue;
      std::vector<double> r;
      for (double x : row) r.push_back(std::isfinite(x) ? x / best : kInf);
      naive.push_back(r);
    }
    const RatioTable rt = performance_ratio(t);
    ++checks;
    bad += rt.ratios == naive ? 0 : 1;
    std::vector<std::string> names(static_cast<std::size_t>(ns), "s");
    const PerfProfile p = performance_profile(rt.ratios, names);
    for (int s = 0; s < ns; ++s) {
      for (std::size_t k = 0; k < p.tau.size(); ++k) {
        ++checks;
        const double expect = oracle::recount(naive, s, p.tau[k]);
        bad += p.rho[static_cast<std::size_t>(s)][k] == expect ? 0 : 1;
        bad += profile_value(rt.ratios, s, p.tau[k]) == expect ? 0 : 1;
      }
    }
  }
  Outcome o;
  o.pass = bad == 0;
  o.detail = std::to_string(checks) + " comparisons, " + std::to_string(bad) + " mismatches";
  return o;
}

// --- criterion 12

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string drop_column(const std::string& csv, std::size_t col) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(ls, cell, ',')) {
      if (k++ != col) out += cell + ',';
    }
    out += '\n';
  }
  return out;
}

std::string pipeline_run(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string out;

  GenSpec bs;
  bs.m = 30;
  bs.n = 200;
  bs.density = 0.1;
  bs.seed = 42;
  const GeneratedBap g = gen_bap_with_known_vertex(bs);
  save_bap((dir / "bap").string(), g.problem);
  out += slurp(dir / "bap.mtx") + slurp(dir / "bap.vec");
  const BapProblem loaded = load_bap((dir / "bap.mtx").string(), (dir / "bap.vec").string());
  std::ostringstream sol;
  write_bap_solution(sol, loaded, solve_rnnm(loaded, Vector()));
  out += sol.str();

  std::ostringstream trace;
  HlwbConfig hc;
  hc.trace = &trace;
  const HlwbResult h = solve_hlwb(loaded, hc);
  out += trace.str();
  for (Eigen::Index i = 0; i < h.x.size(); ++i) out += format_shortest(h.x[i]) + ' ';

  GenSpec ls = bs;
  ls.m = 10;
  ls.n = 40;
  ls.seed = 43;
  const GeneratedLp lp = gen_lp(ls);
  save_lp((dir / "lp").string(), lp.problem);
  out += slurp(dir / "lp.mtx") + slurp(dir / "lp.vec");
  out += solve_lp(load_lp((dir / "lp.mtx").string(), (dir / "lp.vec").string())).report();

  std::istringstream cfg_text(
      "solvers = rnnm-exact, rnnm-inexact, hlwb, ssepf\n"
      "tols = 1e-6\n"
      "gen = bap m=20 n=100 density=0.2 seed=5\n"
      "gen = lp m=8 n=30 density=0.4 seed=6\n"
      "mps = afiro.mps\n");
  SuiteConfig cfg = parse_suite_config(cfg_text, BAPSOLVE_TEST_DATA);
  cfg.output_dir = (dir / "bench").string();
  run_benchmark(cfg);
  out += drop_column(slurp(dir / "bench" / "records.csv"), 7);
  out += drop_column(slurp(dir / "bench" / "results.csv"), 6);
  return out;
}

Outcome criterion12() {
  const fs::path base = fs::temp_directory_path() / "bapsolve_acceptance";
  const std::string a = pipeline_run(base / "a");
  const std::string b = pipeline_run(base / "b");
  fs::remove_all(base);
  Outcome o;
  o.pass = !a.empty() && a == b;
  o.detail = std::to_string(a.size()) + " bytes of non-timing output, " +
             (a == b ? "identical" : "different");
  return o;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "BAP vs construction", criterion1},
      {2, "KKT exactness", criterion2},
      {3, "descent of the regularized step", criterion3},
      {4, "HLWB plateau", criterion4},
      {5, "inexact equals exact", criterion5},
      {6, "stepping-stone sensitivity", criterion6},
      {7, "LP end to end", criterion7},
      {8, "bound ordering and tightness", criterion8},
      {9, "MPS pipeline on afiro", criterion9},
      {10, "triangle projection", criterion10},
      {11, "performance profile math", criterion11},
      {12, "determinism", criterion12},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", e.id, e.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
