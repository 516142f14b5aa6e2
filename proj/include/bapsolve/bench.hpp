#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bapsolve/factory.hpp"
#include "bapsolve/perf_profile.hpp"

namespace bapsolve {

enum class ResidualKind { primal, gap, lp_triplet };
ResidualKind parse_residual_kind(const std::string& s);
std::string to_string(ResidualKind k);

struct GeneratorLine {
  std::string kind;  // "bap" or "lp"
  GenSpec spec;
};

/// key = value lines; '#' starts a comment. Keys: solvers, tols, repetitions,
/// max_iter, timeout, residual, output_dir, gen (repeatable), mps (repeatable).
struct SuiteConfig {
  std::vector<std::string> solvers{"rnnm-exact"};
  std::vector<double> tols{1e-14};
  int repetitions = 1;
  int max_iter = 2000;
  double timeout = 300.0;
  ResidualKind residual = ResidualKind::primal;
  std::string output_dir = "bench_out";
  std::vector<GeneratorLine> generators;
  std::vector<std::string> mps_files;
};

/// Relative paths inside the config resolve against base_dir.
SuiteConfig parse_suite_config(std::istream& in, const std::string& base_dir = ".");
SuiteConfig parse_suite_config_file(const std::string& path);

struct BenchRecord {
  std::string problem;
  std::string group;  // instances averaged together in the results table
  int m = 0;
  int n = 0;
  double density = 0.0;
  std::string solver;
  double tol = 0.0;
  double time = 0.0;  // seconds; meaningless when !success
  double rel_residual = 0.0;
  long iterations = 0;
  std::string status;
  bool success = false;
};

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_records_csv(std::istream& in);

/// Per (group, solver, tol): mean time and residual over the repetitions.
void write_results_csv(std::ostream& out, const std::vector<BenchRecord>& records);

/// "lp" for ssepf, "bap" for the projection solvers.
std::string solver_family(const std::string& solver);

/// One timing table per (tol, solver family) from the records; failures
/// become +inf. Mixed suites get a "_bap"/"_lp" suffix on the profile files.
struct ProfileInput {
  double tol = 0.0;
  std::string family;
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  TimingTable times;
};
std::vector<ProfileInput> timing_tables(const std::vector<BenchRecord>& records);

struct BenchOutput {
  std::vector<BenchRecord> records;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
};

/// Writes records.csv, results.csv and profile_tol_<tol>.csv into output_dir.
/// A failing or throwing solve becomes a failure record.
BenchOutput run_benchmark(const SuiteConfig& cfg);

/// Profiles for an existing records file, written next to `out_prefix`.
std::vector<std::string> write_profiles(const std::vector<BenchRecord>& records,
                                        const std::string& out_dir,
                                        std::vector<std::string>* warnings = nullptr);

}  // namespace bapsolve
