#pragma once

#include <iosfwd>
#include <vector>

#include "bapsolve/bap.hpp"

namespace bapsolve {

/// sigma_k schedule. Harmonic is 1/(k+1). A custom table is used verbatim for
/// its prefix and continues as min(last, 1/(k+1)) beyond it.
class SteeringSequence {
 public:
  static SteeringSequence harmonic();
  /// Throws InvalidArgument unless values lie in [0,1], are non-increasing,
  /// end strictly positive and sum to at least 1.
  static SteeringSequence custom(std::vector<double> table);

  double operator()(long k) const;
  bool is_harmonic() const { return table_.empty(); }

 private:
  std::vector<double> table_;
};

/// Orthogonal projection of x onto {u : a^T u = beta}.
Vector project_hyperplane(const Vector& x, const Vector& a, double beta);
/// Projection onto {u : a^T u <= beta}.
Vector project_halfspace(const Vector& x, const Vector& a, double beta);

struct HlwbConfig {
  double tol = 1e-3;
  long max_sweeps = 2000;
  SteeringSequence steering = SteeringSequence::harmonic();
  double time_limit = 0.0;     // seconds, 0 disables
  std::ostream* trace = nullptr;  // CSV rows: sweep,rel_residual,sigma
};

struct HlwbResult {
  Vector x;
  double rel_residual = 0.0;
  long sweeps = 0;
  long steps = 0;
  SolveStatus status = SolveStatus::max_iter;  // max_iter means the sweep budget ran out
  bool converged() const { return status == SolveStatus::converged; }
};

/// Cyclic anchored projections onto the rows of Ax = b followed by the
/// nonnegative orthant; one sweep is m hyperplane steps plus the orthant step.
HlwbResult solve_hlwb(const BapProblem& p, const HlwbConfig& cfg = {});

}  // namespace bapsolve
