#include "bapsolve/perf_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bapsolve/matrix_market.hpp"
#include "bapsolve/types.hpp"

namespace bapsolve {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool succeeded(double t) { return std::isfinite(t) && t >= 0.0; }
}  // namespace

RatioTable performance_ratio(const TimingTable& times) {
  RatioTable out;
  std::size_t width = times.empty() ? 0 : times.front().size();
  for (std::size_t p = 0; p < times.size(); ++p) {
    const auto& row = times[p];
    if (row.size() != width) throw InvalidArgument("timing table rows differ in length");
    double best = kInf;
    for (double t : row) {
      if (succeeded(t)) best = std::min(best, t);
    }
    if (!std::isfinite(best)) {
      out.dropped.push_back(static_cast<int>(p));
      continue;
    }
    std::vector<double> r(row.size());
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (!succeeded(row[s])) {
        r[s] = kInf;
      } else if (best == 0.0) {
        r[s] = row[s] == 0.0 ? 1.0 : kInf;
      } else {
        r[s] = row[s] / best;
      }
    }
    out.ratios.push_back(std::move(r));
    out.kept.push_back(static_cast<int>(p));
  }
  return out;
}

double profile_value(const TimingTable& ratios, int solver, double tau) {
  if (ratios.empty()) return 0.0;
  int count = 0;
  for (const auto& row : ratios) {
    if (row[static_cast<std::size_t>(solver)] <= tau) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(ratios.size());
}

PerfProfile performance_profile(const TimingTable& ratios, const std::vector<std::string>& solvers,
                                int grid_points) {
  PerfProfile prof;
  prof.solvers = solvers;
  prof.num_problems = static_cast<int>(ratios.size());
  const std::size_t ns = solvers.size();
  for (const auto& row : ratios) {
    if (row.size() != ns) throw InvalidArgument("ratio table width does not match solver list");
  }

  std::vector<double> tau{1.0};
  double tmax = 1.0;
  for (const auto& row : ratios) {
    for (double r : row) {
      if (std::isfinite(r)) {
        tau.push_back(r);
        tmax = std::max(tmax, r);
      }
    }
  }
  if (tmax > 1.0 && grid_points > 1) {
    const double lt = std::log10(tmax);
    for (int k = 1; k < grid_points; ++k) {
      tau.push_back(std::pow(10.0, lt * k / (grid_points - 1)));
    }
    tau.push_back(tmax);
  }
  std::sort(tau.begin(), tau.end());
  tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
  prof.tau = tau;

  // sorted ratios per solver, then a merge walk over tau
  prof.rho.assign(ns, std::vector<double>(tau.size(), 0.0));
  const double np = static_cast<double>(ratios.size());
  for (std::size_t s = 0; s < ns; ++s) {
    std::vector<double> col;
    col.reserve(ratios.size());
    for (const auto& row : ratios) col.push_back(row[s]);
    std::sort(col.begin(), col.end());
    std::size_t idx = 0;
    for (std::size_t k = 0; k < tau.size(); ++k) {
      while (idx < col.size() && col[idx] <= tau[k]) ++idx;
      prof.rho[s][k] = np > 0 ? static_cast<double>(idx) / np : 0.0;
    }
  }
  return prof;
}

void PerfProfile::write_csv(std::ostream& out) const {
  out << "tau";
  for (const auto& s : solvers) out << ',' << s;
  out << '\n';
  for (std::size_t k = 0; k < tau.size(); ++k) {
    out << format_sci(tau[k]);
    for (std::size_t s = 0; s < solvers.size(); ++s) out << ',' << format_sci(rho[s][k]);
    out << '\n';
  }
}

}  // namespace bapsolve
