#include "bapsolve/bench.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <tuple>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "bapsolve/hlwb.hpp"
#include "bapsolve/lp_ssepf.hpp"
#include "bapsolve/matrix_market.hpp"
#include "bapsolve/mps.hpp"

namespace bapsolve {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const double x = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "'", line);
  }
}

long to_long(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const long x = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "'", line);
  }
}

GeneratorLine parse_generator(const std::string& value, int line) {
  std::istringstream ss(value);
  GeneratorLine g;
  if (!(ss >> g.kind) || (g.kind != "bap" && g.kind != "lp")) {
    throw ParseError("generator kind must be bap or lp", line);
  }
  std::string kv;
  while (ss >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("generator field needs key=value", line);
    const std::string k = kv.substr(0, eq);
    const std::string v = kv.substr(eq + 1);
    if (k == "m") {
      g.spec.m = static_cast<int>(to_long(v, line));
    } else if (k == "n") {
      g.spec.n = static_cast<int>(to_long(v, line));
    } else if (k == "density") {
      g.spec.density = to_double(v, line);
    } else if (k == "seed") {
      g.spec.seed = static_cast<std::uint64_t>(to_long(v, line));
    } else if (k == "anchor_norm") {
      g.spec.anchor_norm = to_double(v, line);
    } else if (k == "degeneracy") {
      g.spec.degeneracy = parse_degeneracy(v);
    } else {
      throw ParseError("unknown generator field '" + k + "'", line);
    }
  }
  g.spec.validate();
  return g;
}

const std::vector<std::string>& known_solvers() {
  static const std::vector<std::string> s{"rnnm-exact", "rnnm-inexact", "hlwb", "ssepf"};
  return s;
}

}  // namespace

ResidualKind parse_residual_kind(const std::string& s) {
  if (s == "primal") return ResidualKind::primal;
  if (s == "gap") return ResidualKind::gap;
  if (s == "lp-triplet" || s == "lp_triplet") return ResidualKind::lp_triplet;
  throw InvalidArgument("unknown residual kind '" + s + "'");
}

std::string to_string(ResidualKind k) {
  switch (k) {
    case ResidualKind::primal: return "primal";
    case ResidualKind::gap: return "gap";
    case ResidualKind::lp_triplet: return "lp-triplet";
  }
  return "unknown";
}

SuiteConfig parse_suite_config(std::istream& in, const std::string& base_dir) {
  SuiteConfig cfg;
  std::string raw;
  int line = 0;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path.string() : (fs::path(base_dir) / path).string();
  };
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(raw.substr(0, eq));
    const std::string value = trim(raw.substr(eq + 1));
    if (key == "solvers") {
      cfg.solvers = split(value, ',');
      for (const auto& s : cfg.solvers) {
        if (std::find(known_solvers().begin(), known_solvers().end(), s) == known_solvers().end()) {
          throw ParseError("unknown solver '" + s + "'", line);
        }
      }
    } else if (key == "tols") {
      cfg.tols.clear();
      for (const auto& t : split(value, ',')) cfg.tols.push_back(to_double(t, line));
    } else if (key == "repetitions") {
      cfg.repetitions = static_cast<int>(to_long(value, line));
      if (cfg.repetitions < 1) throw ParseError("repetitions must be positive", line);
    } else if (key == "max_iter") {
      cfg.max_iter = static_cast<int>(to_long(value, line));
    } else if (key == "timeout") {
      cfg.timeout = to_double(value, line);
    } else if (key == "residual") {
      cfg.residual = parse_residual_kind(value);
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(value);
    } else if (key == "gen") {
      cfg.generators.push_back(parse_generator(value, line));
    } else if (key == "mps") {
      cfg.mps_files.push_back(resolve(value));
    } else {
      throw ParseError("unknown key '" + key + "'", line);
    }
  }
  return cfg;
}

SuiteConfig parse_suite_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  const fs::path base = fs::path(path).parent_path();
  return parse_suite_config(in, base.empty() ? "." : base.string());
}

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "problem,group,m,n,density,solver,tol,time,rel_residual,iterations,status\n";
  for (const auto& r : records) {
    out << r.problem << ',' << r.group << ',' << r.m << ',' << r.n << ',' << format_sci(r.density)
        << ',' << r.solver << ',' << format_sci(r.tol) << ','
        << (r.success ? format_sci(r.time) : std::string("fail")) << ','
        << format_sci(r.rel_residual) << ',' << r.iterations << ',' << r.status << '\n';
  }
}

std::vector<BenchRecord> read_records_csv(std::istream& in) {
  std::vector<BenchRecord> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    raw = trim(raw);
    if (raw.empty()) continue;
    if (line == 1 && raw.rfind("problem,", 0) == 0) continue;
    const auto f = split(raw, ',');
    if (f.size() != 11) throw ParseError("records row needs 11 fields", line);
    BenchRecord r;
    r.problem = f[0];
    r.group = f[1];
    r.m = static_cast<int>(to_long(f[2], line));
    r.n = static_cast<int>(to_long(f[3], line));
    r.density = to_double(f[4], line);
    r.solver = f[5];
    r.tol = to_double(f[6], line);
    r.success = f[7] != "fail";
    r.time = r.success ? to_double(f[7], line) : kInf;
    r.rel_residual = f[8] == "inf" ? kInf : to_double(f[8], line);
    r.iterations = to_long(f[9], line);
    r.status = f[10];
    out.push_back(std::move(r));
  }
  return out;
}

void write_results_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  struct Acc {
    int m = 0, n = 0;
    double density = 0.0;
    double time = 0.0;
    double resid = 0.0;
    int successes = 0;
    int count = 0;
  };
  std::vector<std::tuple<std::string, std::string, double>> order;
  std::map<std::tuple<std::string, std::string, double>, Acc> acc;
  for (const auto& r : records) {
    const auto key = std::make_tuple(r.group, r.solver, r.tol);
    auto it = acc.find(key);
    if (it == acc.end()) {
      order.push_back(key);
      it = acc.emplace(key, Acc{r.m, r.n, r.density}).first;
    }
    Acc& a = it->second;
    ++a.count;
    a.resid += r.rel_residual;
    if (r.success) {
      ++a.successes;
      a.time += r.time;
    }
  }
  out << "group,m,n,density,solver,tol,mean_time,mean_rel_residual,successes,count\n";
  for (const auto& key : order) {
    const Acc& a = acc[key];
    out << std::get<0>(key) << ',' << a.m << ',' << a.n << ',' << format_sci(a.density) << ','
        << std::get<1>(key) << ',' << format_sci(std::get<2>(key)) << ','
        << (a.successes ? format_sci(a.time / a.successes) : std::string("fail")) << ','
        << format_sci(a.resid / a.count) << ',' << a.successes << ',' << a.count << '\n';
  }
}

std::string solver_family(const std::string& solver) { return solver == "ssepf" ? "lp" : "bap"; }

std::vector<ProfileInput> timing_tables(const std::vector<BenchRecord>& records) {
  std::vector<ProfileInput> out;
  std::vector<std::pair<double, std::string>> keys;
  for (const auto& r : records) {
    const std::pair<double, std::string> k{r.tol, solver_family(r.solver)};
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
  }
  for (const auto& [tol, family] : keys) {
    ProfileInput in;
    in.tol = tol;
    in.family = family;
    std::map<std::string, int> prow, scol;
    auto selected = [&](const BenchRecord& r) {
      return r.tol == tol && solver_family(r.solver) == family;
    };
    for (const auto& r : records) {
      if (!selected(r)) continue;
      if (!prow.count(r.problem)) {
        prow[r.problem] = static_cast<int>(in.problems.size());
        in.problems.push_back(r.problem);
      }
      if (!scol.count(r.solver)) {
        scol[r.solver] = static_cast<int>(in.solvers.size());
        in.solvers.push_back(r.solver);
      }
    }
    in.times.assign(in.problems.size(), std::vector<double>(in.solvers.size(), kInf));
    for (const auto& r : records) {
      if (!selected(r)) continue;
      in.times[static_cast<std::size_t>(prow[r.problem])][static_cast<std::size_t>(scol[r.solver])] =
          r.success ? r.time : kInf;
    }
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<std::string> write_profiles(const std::vector<BenchRecord>& records,
                                        const std::string& out_dir,
                                        std::vector<std::string>* warnings) {
  std::vector<std::string> files;
  fs::create_directories(out_dir);
  const auto tables = timing_tables(records);
  bool mixed = false;
  for (const auto& t : tables) mixed = mixed || t.family != tables.front().family;
  for (const auto& t : tables) {
    const RatioTable rt = performance_ratio(t.times);
    if (warnings) {
      for (int p : rt.dropped) {
        warnings->push_back("tol " + format_sci(t.tol) + ": no solver succeeded on " +
                            t.problems[static_cast<std::size_t>(p)] + ", dropped from profile");
      }
    }
    const PerfProfile prof = performance_profile(rt.ratios, t.solvers);
    const std::string path = (fs::path(out_dir) / ("profile_tol_" + format_sci(t.tol) +
                                                   (mixed ? "_" + t.family : "") + ".csv"))
                                 .string();
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path);
    prof.write_csv(out);
    files.push_back(path);
  }
  return files;
}

namespace {

struct BenchProblem {
  std::string id;
  std::string group;
  double density = 0.0;
  bool is_lp = false;
  std::optional<GeneratedBap> bap;
  LpProblem lp;
  int m = 0;
  int n = 0;
};

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void run_bap(const BenchProblem& prob, const std::string& solver, double tol,
             const SuiteConfig& cfg, BenchRecord& rec) {
  const BapProblem& p = prob.bap->problem;
  const double p_star = primal_objective(p, prob.bap->known_x);
  Vector x;
  if (solver == "hlwb") {
    HlwbConfig hc;
    hc.tol = tol;
    hc.max_sweeps = cfg.max_iter;
    hc.time_limit = cfg.timeout;
    const auto t0 = clock_type::now();
    const HlwbResult r = solve_hlwb(p, hc);
    rec.time = seconds_since(t0);
    rec.iterations = r.sweeps;
    rec.status = r.status == SolveStatus::max_iter ? "max_sweeps" : to_string(r.status);
    rec.success = r.converged();
    rec.rel_residual = r.rel_residual;
    x = r.x;
  } else {
    RnnmConfig rc;
    rc.tol = tol;
    rc.max_iter = cfg.max_iter;
    rc.mode = solver == "rnnm-inexact" ? RnnmMode::inexact : RnnmMode::exact;
    rc.time_limit = cfg.timeout;
    const auto t0 = clock_type::now();
    const BapSolution s = solve_rnnm(p, Vector(), rc);
    rec.time = seconds_since(t0);
    rec.iterations = s.iterations;
    rec.status = to_string(s.status);
    rec.success = s.converged();
    rec.rel_residual = s.rel_residual;
    x = s.x;
    if (cfg.residual == ResidualKind::lp_triplet) {
      const KktReport k = kkt_report(p, s);
      rec.rel_residual = k.primal_feas + k.dual_feas + k.comp_slack;
    }
  }
  if (cfg.residual == ResidualKind::gap) {
    rec.rel_residual = std::abs(primal_objective(p, x) - p_star) / (1.0 + std::abs(p_star));
  }
  if (rec.success && cfg.timeout > 0.0 && rec.time > cfg.timeout) {
    rec.success = false;
    rec.status = "timeout";
  }
}

void run_lp(const BenchProblem& prob, double tol, const SuiteConfig& cfg, BenchRecord& rec) {
  SsepfConfig sc;
  sc.tol_gap = tol;
  sc.sub.max_iter = cfg.max_iter;
  sc.time_limit = cfg.timeout;
  const auto t0 = clock_type::now();
  const LpSolveResult r = solve_lp(prob.lp, sc);
  rec.time = seconds_since(t0);
  rec.iterations = static_cast<long>(r.stones.size());
  rec.status = to_string(r.status);
  const double gap = r.cert.gap();
  rec.success = r.status == LpSolveStatus::optimal && gap <= tol;
  switch (cfg.residual) {
    case ResidualKind::primal: rec.rel_residual = r.cert.primal_residual; break;
    case ResidualKind::gap: rec.rel_residual = gap; break;
    case ResidualKind::lp_triplet:
      rec.rel_residual = r.cert.primal_residual + r.cert.dual_residual + r.cert.comp_residual;
      break;
  }
  if (rec.success && cfg.timeout > 0.0 && rec.time > cfg.timeout) {
    rec.success = false;
    rec.status = "timeout";
  }
}

}  // namespace

BenchOutput run_benchmark(const SuiteConfig& cfg) {
  BenchOutput out;
  std::vector<BenchProblem> problems;
  for (const auto& g : cfg.generators) {
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
      GenSpec spec = g.spec;
      spec.seed = g.spec.seed + static_cast<std::uint64_t>(rep);
      BenchProblem bp;
      std::ostringstream group;
      group << g.kind << " m=" << spec.m << " n=" << spec.n << " d=" << format_sci(spec.density);
      bp.group = group.str();
      bp.density = spec.density;
      bp.id = g.kind + "_m" + std::to_string(spec.m) + "_n" + std::to_string(spec.n) + "_s" +
              std::to_string(spec.seed);
      try {
        if (g.kind == "bap") {
          bp.bap = gen_bap_with_known_vertex(spec);
          bp.m = bp.bap->problem.m();
          bp.n = bp.bap->problem.n();
        } else {
          bp.is_lp = true;
          bp.lp = gen_lp(spec).problem;
          bp.m = bp.lp.m();
          bp.n = bp.lp.n();
        }
      } catch (const std::exception& e) {
        out.warnings.push_back("generation failed for " + bp.id + ": " + e.what());
        continue;
      }
      problems.push_back(std::move(bp));
    }
  }
  for (const auto& path : cfg.mps_files) {
    BenchProblem bp;
    bp.is_lp = true;
    bp.id = fs::path(path).stem().string();
    bp.group = "mps " + bp.id;
    try {
      bp.lp = to_standard_form(parse_mps_file(path)).lp;
    } catch (const std::exception& e) {
      out.warnings.push_back("could not load " + path + ": " + e.what());
      continue;
    }
    bp.m = bp.lp.m();
    bp.n = bp.lp.n();
    bp.density = bp.m && bp.n ? static_cast<double>(bp.lp.a.nonZeros()) / (double(bp.m) * bp.n) : 0.0;
    problems.push_back(std::move(bp));
  }

  for (double tol : cfg.tols) {
    for (const auto& prob : problems) {
      for (const auto& solver : cfg.solvers) {
        const bool lp_solver = solver == "ssepf";
        if (lp_solver != prob.is_lp) continue;
        BenchRecord rec;
        rec.problem = prob.id;
        rec.group = prob.group;
        rec.m = prob.m;
        rec.n = prob.n;
        rec.density = prob.density;
        rec.solver = solver;
        rec.tol = tol;
        try {
          if (prob.is_lp) {
            run_lp(prob, tol, cfg, rec);
          } else {
            run_bap(prob, solver, tol, cfg, rec);
          }
        } catch (const std::exception& e) {
          rec.success = false;
          rec.status = "error";
          rec.rel_residual = kInf;
          out.warnings.push_back(prob.id + " / " + solver + ": " + e.what());
        }
        if (!rec.success) rec.time = kInf;
        out.records.push_back(std::move(rec));
      }
    }
  }

  fs::create_directories(cfg.output_dir);
  const std::string rec_path = (fs::path(cfg.output_dir) / "records.csv").string();
  {
    std::ofstream f(rec_path);
    if (!f) throw InvalidArgument("cannot write " + rec_path);
    write_records_csv(f, out.records);
  }
  out.files.push_back(rec_path);
  const std::string res_path = (fs::path(cfg.output_dir) / "results.csv").string();
  {
    std::ofstream f(res_path);
    if (!f) throw InvalidArgument("cannot write " + res_path);
    write_results_csv(f, out.records);
  }
  out.files.push_back(res_path);
  for (auto& p : write_profiles(out.records, cfg.output_dir, &out.warnings)) out.files.push_back(p);
  return out;
}

}  // namespace bapsolve
