#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bapsolve/sparse_linalg.hpp"
#include "bapsolve/types.hpp"

namespace bapsolve {

enum class Sign : std::uint8_t { nonnegative, free };

/// min 0.5*||x - v||^2  s.t.  Ax = b, x_i >= 0 for every nonnegative-flagged i.
class BapProblem {
 public:
  /// An empty `signs` means all variables are nonnegative. Throws
  /// InvalidArgument on dimension mismatch, non-finite data or a zero column.
  BapProblem(SparseMatrix a, Vector b, Vector v, std::vector<Sign> signs = {});

  int m() const { return static_cast<int>(a_.rows()); }
  int n() const { return static_cast<int>(a_.cols()); }
  const SparseMatrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const Vector& v() const { return v_; }
  const std::vector<Sign>& signs() const { return signs_; }
  bool is_free(int i) const { return signs_[static_cast<std::size_t>(i)] == Sign::free; }
  int num_free() const { return num_free_; }
  bool has_free() const { return num_free_ > 0; }
  const Vector& column_norms_sq() const { return col_norms_sq_; }

  /// A copy with a different right-hand side or anchor.
  BapProblem with_rhs(Vector b) const;
  BapProblem with_anchor(Vector v) const;

 private:
  SparseMatrix a_;
  Vector b_;
  Vector v_;
  std::vector<Sign> signs_;
  Vector col_norms_sq_;
  int num_free_ = 0;
};

struct IndexSets {
  IndexSet plus;
  IndexSet zero;
  IndexSet minus;
  IndexSet zero_bar;  // independent subset of `zero`
  IndexSet free;
};

enum class SolveStatus { converged, max_iter, stalled, time_limit };
std::string to_string(SolveStatus s);

struct BapSolution {
  Vector x;
  Vector y;
  Vector z;
  double rel_residual = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::max_iter;
  bool retried = false;
  bool converged() const { return status == SolveStatus::converged; }
};

enum class RnnmMode { exact, inexact };

/// `algorithm`: min(1e-3, relres) in exact mode and relres^delta in inexact mode.
/// `constant`: fixed_lambda every iteration. `adaptive`: the three-term mean.
enum class RegularizationRule { algorithm, constant, adaptive };

struct RnnmConfig {
  double tol = 1e-14;
  int max_iter = 2000;
  RnnmMode mode = RnnmMode::exact;
  double delta = 1.0;
  double nu = 2.0;
  double theta = 0.5;
  RegularizationRule regularization = RegularizationRule::adaptive;
  double fixed_lambda = 1e-3;
  bool damping = true;
  int damping_onset = 500;
  bool retry = true;
  int cg_max_iter = 0;  // 0 selects 10*m + 100
  double time_limit = 0.0;  // seconds, 0 disables

  /// Called after the residual of every iterate is known (k = 0 is y0).
  std::function<void(int k, const Vector& y, const Vector& f)> observer;

  void validate() const;
};

/// v + A^T y
Vector shifted_anchor(const BapProblem& p, const Vector& y);

/// Clamp map: max(t, 0) on nonnegative coordinates, identity on free ones.
Vector clamp_point(const BapProblem& p, const Vector& t);

/// F(y) = A * clamp(v + A^T y) - b
Vector residual(const BapProblem& p, const Vector& y);

/// 1e-11 * (1 + ||t||_inf)
double default_zero_tol(const Vector& t);

/// Splits constrained coordinates by the sign of v + A^T y. Values within
/// zero_tol of 0 go to `zero`. A negative zero_tol selects the default.
IndexSets classify_indices(const BapProblem& p, const Vector& y, double zero_tol = -1.0);

/// Column weights of the chosen generalized Jacobian A diag(u) A^T.
Vector jacobian_weights(const BapProblem& p, const IndexSets& sets);
SymmetricMatrix generalized_jacobian(const BapProblem& p, const IndexSets& sets);

double regularization_lambda(const RnnmConfig& cfg, double rel_residual, double newton_dir_norm,
                             double v_norm);

/// x, z and residual for a given multiplier y. Status and iteration count are
/// left for the caller.
BapSolution certificate_from_multiplier(const BapProblem& p, const Vector& y);

/// Regularized nonsmooth Newton iteration from y0 (empty y0 means zero).
BapSolution solve_rnnm(const BapProblem& p, const Vector& y0, const RnnmConfig& cfg = {});

/// -0.5*||z + A^T y||^2 + y^T (b - A v) - z^T v
double dual_objective(const BapProblem& p, const Vector& y, const Vector& z);
double primal_objective(const BapProblem& p, const Vector& x);

struct KktReport {
  double primal_feas = 0.0;
  double dual_feas = 0.0;
  double comp_slack = 0.0;
};
KktReport kkt_report(const BapProblem& p, const BapSolution& sol);

enum class VertexKind { nondegenerate_vertex, degenerate_vertex, non_vertex };
std::string to_string(VertexKind k);

/// Throws InvalidState when sol is not converged.
VertexKind is_vertex(const BapProblem& p, const BapSolution& sol, double zero_tol = -1.0);

}  // namespace bapsolve
