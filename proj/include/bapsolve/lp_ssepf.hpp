#pragma once

#include <string>
#include <vector>

#include "bapsolve/bap.hpp"
#include "bapsolve/lp_problem.hpp"

namespace bapsolve {

/// min(50, sqrt(mn) ||b|| / (1 + ||c||)), or 1 when b = 0.
double initial_radius(const LpProblem& lp);

/// BAP with anchor c, matrix A and right-hand side b / R.
BapProblem scaled_subproblem(const LpProblem& lp, double r);

struct Bases {
  IndexSet basic;     // w_i > tol
  IndexSet nonbasic;  // z_i > tol
  IndexSet zero;      // neither
};

/// 1e-11 * (1 + ||w||_inf + ||z||_inf)
double basis_zero_tol(const Vector& w, const Vector& z);

/// Throws InconsistentCertificate if some index is in both B and N.
Bases classify_bases(const Vector& w, const Vector& z, double zero_tol);

struct SsepfState {
  double r = 1.0;
  Vector w;
  Vector y;
  Vector z;
  Bases bases;
  int stone_count = 0;
};

struct StoneStep {
  double r_next = 0.0;  // +inf when the bases never change again
  Vector dy_p;          // direction with A_B A_B^T dy_p = b and A_Z^T dy_p = 0
  Vector dy;            // multiplier step to r_next
  Vector dw_b;
  Vector dz_n;
  // ratio vectors over the candidates of each block, in B then N order
  Vector e;
  Vector f;
};

/// Minimum of f_i / e_i over e_i > 0 and f_i > 0; +inf for the empty set.
double ratio_test(const Vector& e, const Vector& f);

/// Sensitivity analysis at the current stone. Throws SensitivityFailure when
/// the restricted least-squares system is inconsistent.
StoneStep next_stone(const LpProblem& lp, const SsepfState& state, bool augment_with_zero = false);

struct LpCertificate {
  Vector x;
  Vector y_lp;
  Vector z_lp;
  double lower = 0.0;
  double upper = 0.0;
  bool upper_failed = false;  // dual projection did not converge; upper is +inf
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double comp_residual = 0.0;
  double gap() const;
};

/// lower = c^T (R w); upper = b^T y_lp from the nearest dual feasible point.
LpCertificate lp_bounds(const LpProblem& lp, const SsepfState& state,
                        const RnnmConfig& dual_cfg = {});

struct SsepfConfig {
  double tol_gap = 1e-8;
  int max_stones = 100;
  RnnmConfig sub;
  bool augment_with_zero = false;
  double time_limit = 0.0;  // seconds, 0 disables
};

enum class LpSolveStatus { optimal, stone_limit, subproblem_failure, time_limit };
std::string to_string(LpSolveStatus s);

struct StoneRecord {
  int index = 0;
  double r = 0.0;
  double r_next = 0.0;
  int iterations = 0;
  int num_basic = 0;
  int num_nonbasic = 0;
  int num_zero = 0;
  double w_norm = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
  double dual_zb = 0.0;  // max |z_lp| over the basic set
  bool sensitivity_failed = false;
};

struct LpSolveResult {
  LpCertificate cert;
  LpSolveStatus status = LpSolveStatus::stone_limit;
  std::vector<StoneRecord> stones;
  bool degenerate = false;  // some stone had Z nonempty
  std::string message;

  double objective() const { return cert.lower; }
  /// Structured text report (JSON) with the R sequence, per-stone gaps and residuals.
  std::string report() const;
};

LpSolveResult solve_lp(const LpProblem& lp, const SsepfConfig& cfg = {});

}  // namespace bapsolve
