#include "bapsolve/bap.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace bapsolve {

BapProblem::BapProblem(SparseMatrix a, Vector b, Vector v, std::vector<Sign> signs)
    : a_(std::move(a)), b_(std::move(b)), v_(std::move(v)), signs_(std::move(signs)) {
  if (b_.size() != a_.rows()) throw InvalidArgument("b length must equal rows of A");
  if (v_.size() != a_.cols()) throw InvalidArgument("v length must equal columns of A");
  if (signs_.empty()) signs_.assign(static_cast<std::size_t>(a_.cols()), Sign::nonnegative);
  if (static_cast<Eigen::Index>(signs_.size()) != a_.cols()) {
    throw InvalidArgument("sign pattern length must equal columns of A");
  }
  require_finite(b_, "b");
  require_finite(v_, "v");
  a_.makeCompressed();
  for (Eigen::Index k = 0; k < a_.nonZeros(); ++k) {
    if (!std::isfinite(a_.valuePtr()[k])) throw InvalidArgument("A has non-finite entries");
  }
  col_norms_sq_ = column_norms_squared(a_);
  for (int j = 0; j < a_.cols(); ++j) {
    if (col_norms_sq_[j] == 0.0) {
      throw InvalidArgument("column " + std::to_string(j) + " of A is zero");
    }
  }
  num_free_ = static_cast<int>(std::count(signs_.begin(), signs_.end(), Sign::free));
}

BapProblem BapProblem::with_rhs(Vector b) const {
  BapProblem out = *this;
  if (b.size() != b_.size()) throw InvalidArgument("b length must equal rows of A");
  require_finite(b, "b");
  out.b_ = std::move(b);
  return out;
}

BapProblem BapProblem::with_anchor(Vector v) const {
  BapProblem out = *this;
  if (v.size() != v_.size()) throw InvalidArgument("v length must equal columns of A");
  require_finite(v, "v");
  out.v_ = std::move(v);
  return out;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

std::string to_string(VertexKind k) {
  switch (k) {
    case VertexKind::nondegenerate_vertex: return "nondegenerate_vertex";
    case VertexKind::degenerate_vertex: return "degenerate_vertex";
    case VertexKind::non_vertex: return "non_vertex";
  }
  return "unknown";
}

void RnnmConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (max_iter < 0) throw InvalidArgument("max_iter must be nonnegative");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidArgument("delta must lie in (0, 1]");
  if (!(nu >= 1.0 + delta / 2.0 && nu <= 2.0)) {
    throw InvalidArgument("nu must lie in [1 + delta/2, 2]");
  }
  if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
  if (regularization == RegularizationRule::constant && !(fixed_lambda > 0.0)) {
    throw InvalidArgument("fixed_lambda must be positive");
  }
  if (damping_onset < 0) throw InvalidArgument("damping_onset must be nonnegative");
}

Vector shifted_anchor(const BapProblem& p, const Vector& y) {
  if (y.size() != p.m()) throw InvalidArgument("y length must equal rows of A");
  return p.v() + p.a().transpose() * y;
}

Vector clamp_point(const BapProblem& p, const Vector& t) {
  Vector x = t;
  for (int i = 0; i < p.n(); ++i) {
    if (!p.is_free(i) && x[i] < 0.0) x[i] = 0.0;
  }
  return x;
}

Vector residual(const BapProblem& p, const Vector& y) {
  return p.a() * clamp_point(p, shifted_anchor(p, y)) - p.b();
}

double default_zero_tol(const Vector& t) {
  return 1e-11 * (1.0 + (t.size() ? t.lpNorm<Eigen::Infinity>() : 0.0));
}

namespace {

IndexSets classify_shifted(const BapProblem& p, const Vector& t, double zero_tol) {
  if (zero_tol < 0.0) zero_tol = default_zero_tol(t);
  IndexSets s;
  for (int i = 0; i < p.n(); ++i) {
    if (p.is_free(i)) {
      s.free.push_back(i);
    } else if (std::abs(t[i]) <= zero_tol) {
      s.zero.push_back(i);
    } else if (t[i] > 0.0) {
      s.plus.push_back(i);
    } else {
      s.minus.push_back(i);
    }
  }
  s.zero_bar = independent_columns(p.a(), s.zero);
  return s;
}

IndexSet jacobian_support(const IndexSets& sets) {
  IndexSet support;
  support.reserve(sets.plus.size() + sets.free.size() + sets.zero_bar.size());
  support.insert(support.end(), sets.plus.begin(), sets.plus.end());
  support.insert(support.end(), sets.free.begin(), sets.free.end());
  support.insert(support.end(), sets.zero_bar.begin(), sets.zero_bar.end());
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace

IndexSets classify_indices(const BapProblem& p, const Vector& y, double zero_tol) {
  return classify_shifted(p, shifted_anchor(p, y), zero_tol);
}

Vector jacobian_weights(const BapProblem& p, const IndexSets& sets) {
  Vector u = Vector::Zero(p.n());
  for (int i : sets.plus) u[i] = 1.0;
  for (int i : sets.free) u[i] = 1.0;
  for (int i : sets.zero_bar) u[i] = std::min(1.0, 1.0 / p.column_norms_sq()[i]);
  return u;
}

SymmetricMatrix generalized_jacobian(const BapProblem& p, const IndexSets& sets) {
  return assemble_normal_matrix(p.a(), jacobian_weights(p, sets), jacobian_support(sets));
}

double regularization_lambda(const RnnmConfig& cfg, double rel_residual, double newton_dir_norm,
                             double v_norm) {
  if (!(rel_residual >= 0.0)) throw InvalidArgument("rel_residual must be nonnegative");
  switch (cfg.regularization) {
    case RegularizationRule::constant:
      return cfg.fixed_lambda;
    case RegularizationRule::algorithm:
      if (cfg.mode == RnnmMode::exact) return std::min(1e-3, rel_residual);
      return std::pow(rel_residual, cfg.delta);
    case RegularizationRule::adaptive: {
      auto log_floor = [](double x) { return x > 0.0 ? std::max(1.0, std::log10(x)) : 1.0; };
      const double t1 = 1e-2 * rel_residual * log_floor(newton_dir_norm);
      const double t2 = 1e-3 * rel_residual * log_floor(v_norm);
      const double t3 = 1e-3 * rel_residual;
      return (t1 + t2 + t3) / 3.0;
    }
  }
  return cfg.fixed_lambda;
}

BapSolution certificate_from_multiplier(const BapProblem& p, const Vector& y) {
  BapSolution sol;
  sol.y = y;
  const Vector t = shifted_anchor(p, y);
  sol.x = clamp_point(p, t);
  sol.z = Vector::Zero(p.n());
  for (int i = 0; i < p.n(); ++i) {
    if (!p.is_free(i) && t[i] < 0.0) sol.z[i] = -t[i];
  }
  sol.rel_residual = (p.a() * sol.x - p.b()).norm() / (1.0 + p.b().norm());
  return sol;
}

namespace {

Vector newton_direction(const BapProblem& p, const IndexSets& sets, const Vector& f,
                        double lambda, double f_norm, const RnnmConfig& cfg) {
  const Vector u = jacobian_weights(p, sets);
  const IndexSet support = jacobian_support(sets);
  if (cfg.mode == RnnmMode::exact) {
    const SymmetricMatrix v = assemble_normal_matrix(p.a(), u, support);
    // Roundoff can defeat a tiny shift on a singular V; grow it until the factor exists.
    double shift = lambda;
    for (int attempt = 0;; ++attempt) {
      try {
        return CholFactor(v, shift).solve(-f);
      } catch (const NotPositiveDefinite&) {
        if (attempt >= 8) throw;
        const double scale = std::max(1.0, v.diagonal().maxCoeff());
        shift = std::max(shift * 100.0, 1e-14 * scale);
      }
    }
  }
  const SparseMatrix as = select_columns(p.a(), support);
  Vector us(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) us[static_cast<Eigen::Index>(k)] = u[support[k]];
  Vector diag = as.cwiseAbs2() * us;
  diag.array() += lambda;
  LinearOperator op = [&](const Vector& x, Vector& out) {
    out = as * us.cwiseProduct(as.transpose() * x) + lambda * x;
  };
  const int max_it = cfg.cg_max_iter > 0 ? cfg.cg_max_iter : 10 * p.m() + 100;
  // capped at theta*||F|| so a large residual cannot accept the zero step
  const double tol = cfg.theta * std::min(f_norm, std::pow(f_norm, cfg.nu));
  return conjugate_gradient(op, diag, -f, tol, max_it).x;
}

BapSolution run_rnnm(const BapProblem& p, Vector y, const RnnmConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const double denom = 1.0 + p.b().norm();
  const double v_norm = p.v().norm();

  Vector best_y = y;
  double best_rel = std::numeric_limits<double>::infinity();
  double d_norm = 0.0;
  SolveStatus status = SolveStatus::max_iter;
  int k = 0;
  for (;; ++k) {
    const Vector t = p.v() + p.a().transpose() * y;
    const Vector f = p.a() * clamp_point(p, t) - p.b();
    const double f_norm = f.norm();
    const double rel = f_norm / denom;
    if (cfg.observer) cfg.observer(k, y, f);
    if (rel < best_rel) {
      best_rel = rel;
      best_y = y;
    }
    if (rel <= cfg.tol) {
      status = SolveStatus::converged;
      break;
    }
    if (k >= cfg.max_iter) {
      status = SolveStatus::max_iter;
      break;
    }
    if (cfg.time_limit > 0.0 &&
        std::chrono::duration<double>(clock::now() - start).count() > cfg.time_limit) {
      status = SolveStatus::time_limit;
      break;
    }
    const IndexSets sets = classify_shifted(p, t, -1.0);
    const double lambda = regularization_lambda(cfg, rel, d_norm, v_norm);
    Vector d = newton_direction(p, sets, f, lambda, f_norm, cfg);
    if (cfg.damping && k >= cfg.damping_onset) d *= 0.5;
    if (!d.allFinite()) {
      status = SolveStatus::stalled;
      break;
    }
    Vector y_next = y + d;
    if (y_next == y) {
      status = SolveStatus::stalled;
      break;
    }
    d_norm = d.norm();
    y = std::move(y_next);
  }

  BapSolution sol = certificate_from_multiplier(p, status == SolveStatus::converged ? y : best_y);
  sol.iterations = k;
  sol.status = status;
  return sol;
}

}  // namespace

BapSolution solve_rnnm(const BapProblem& p, const Vector& y0, const RnnmConfig& cfg) {
  cfg.validate();
  Vector y = y0.size() == 0 ? Vector::Zero(p.m()) : y0;
  if (y.size() != p.m()) throw InvalidArgument("y0 length must equal rows of A");
  require_finite(y, "y0");
  BapSolution sol = run_rnnm(p, std::move(y), cfg);
  if (!sol.converged() && cfg.retry && sol.status != SolveStatus::time_limit) {
    RnnmConfig relaxed = cfg;
    relaxed.tol = 10.0 * cfg.tol;
    relaxed.retry = false;
    BapSolution again = run_rnnm(p, sol.y, relaxed);
    again.iterations += sol.iterations;
    again.retried = true;
    if (again.converged() || again.rel_residual < sol.rel_residual) return again;
    sol.retried = true;
  }
  return sol;
}

double dual_objective(const BapProblem& p, const Vector& y, const Vector& z) {
  if (y.size() != p.m() || z.size() != p.n()) throw InvalidArgument("dual dimension mismatch");
  const Vector w = z + p.a().transpose() * y;
  return -0.5 * w.squaredNorm() + y.dot(p.b() - p.a() * p.v()) - z.dot(p.v());
}

double primal_objective(const BapProblem& p, const Vector& x) {
  return 0.5 * (x - p.v()).squaredNorm();
}

KktReport kkt_report(const BapProblem& p, const BapSolution& sol) {
  KktReport r;
  r.primal_feas = (p.a() * sol.x - p.b()).norm() / (1.0 + p.b().norm());
  const Vector t = shifted_anchor(p, sol.y);
  r.dual_feas = ((sol.x - sol.z) - t).norm() / (1.0 + p.v().norm());
  r.comp_slack =
      std::abs(sol.z.dot(sol.x)) / (1.0 + std::max(sol.x.norm(), sol.z.norm()));
  return r;
}

VertexKind is_vertex(const BapProblem& p, const BapSolution& sol, double zero_tol) {
  if (!sol.converged()) throw InvalidState("is_vertex needs a converged solution");
  const IndexSets sets = classify_indices(p, sol.y, zero_tol);
  IndexSet support = sets.plus;
  support.insert(support.end(), sets.free.begin(), sets.free.end());
  std::sort(support.begin(), support.end());
  const IndexSet indep = independent_columns(p.a(), support);
  if (indep.size() < support.size()) return VertexKind::non_vertex;
  const int m1 = p.m() - p.num_free();
  if (static_cast<int>(sets.plus.size()) == m1 && sets.zero.empty()) {
    return VertexKind::nondegenerate_vertex;
  }
  return VertexKind::degenerate_vertex;
}

}  // namespace bapsolve
