#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bapsolve {

/// Rows are problems, columns solvers. +inf (or NaN) marks a failed run.
using TimingTable = std::vector<std::vector<double>>;

struct RatioTable {
  TimingTable ratios;             // only the kept problems
  std::vector<int> kept;          // original row index of each ratio row
  std::vector<int> dropped;       // rows where no solver succeeded
};

/// r = t / min over successful solvers, +inf for failures. Rows with no
/// success are dropped and reported in `dropped`.
RatioTable performance_ratio(const TimingTable& times);

struct PerfProfile {
  std::vector<std::string> solvers;
  std::vector<double> tau;                 // ascending, starts at 1
  std::vector<std::vector<double>> rho;    // rho[s][k] at tau[k]
  int num_problems = 0;

  void write_csv(std::ostream& out) const;
};

/// Fraction of problems with r <= tau, evaluated directly.
double profile_value(const TimingTable& ratios, int solver, double tau);

/// Empirical distribution of the ratios on a log grid from 1 to the largest
/// finite ratio plus every finite ratio value.
PerfProfile performance_profile(const TimingTable& ratios, const std::vector<std::string>& solvers,
                                int grid_points = 50);

}  // namespace bapsolve
