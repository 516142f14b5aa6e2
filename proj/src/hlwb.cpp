#include "bapsolve/hlwb.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "bapsolve/matrix_market.hpp"

namespace bapsolve {

SteeringSequence SteeringSequence::harmonic() { return SteeringSequence(); }

SteeringSequence SteeringSequence::custom(std::vector<double> table) {
  if (table.empty()) throw InvalidArgument("steering table is empty");
  double sum = 0.0;
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double s = table[k];
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("steering values must lie in [0, 1]");
    if (k > 0 && s > table[k - 1]) throw InvalidArgument("steering table must be non-increasing");
    sum += s;
  }
  if (!(table.back() > 0.0)) throw InvalidArgument("steering table must end positive");
  if (sum < 1.0) throw InvalidArgument("steering table partial sum is below 1");
  SteeringSequence out;
  out.table_ = std::move(table);
  return out;
}

double SteeringSequence::operator()(long k) const {
  const double harm = 1.0 / (static_cast<double>(k) + 1.0);
  if (table_.empty()) return harm;
  if (k < static_cast<long>(table_.size())) return table_[static_cast<std::size_t>(k)];
  return std::min(table_.back(), harm);
}

Vector project_hyperplane(const Vector& x, const Vector& a, double beta) {
  const double nrm2 = a.squaredNorm();
  if (nrm2 == 0.0) throw InvalidArgument("zero row in hyperplane projection");
  return x + ((beta - a.dot(x)) / nrm2) * a;
}

Vector project_halfspace(const Vector& x, const Vector& a, double beta) {
  const double nrm2 = a.squaredNorm();
  if (nrm2 == 0.0) throw InvalidArgument("zero row in halfspace projection");
  const double gap = beta - a.dot(x);
  if (gap >= 0.0) return x;
  return x + (gap / nrm2) * a;
}

HlwbResult solve_hlwb(const BapProblem& p, const HlwbConfig& cfg) {
  if (p.has_free()) throw InvalidArgument("hlwb handles nonnegative variables only");
  if (!(cfg.tol > 0.0)) throw InvalidArgument("tol must be positive");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  const RowMajorMatrix rows = p.a();
  const int m = p.m();
  const Vector& v = p.v();
  const Vector& b = p.b();
  Vector row_norm2(m);
  Vector row_dot_v(m);
  for (int i = 0; i < m; ++i) {
    double s = 0.0, t = 0.0;
    for (RowMajorMatrix::InnerIterator it(rows, i); it; ++it) {
      s += it.value() * it.value();
      t += it.value() * v[it.col()];
    }
    if (s == 0.0) throw InvalidArgument("row " + std::to_string(i) + " of A is zero");
    row_norm2[i] = s;
    row_dot_v[i] = t;
  }
  const double denom = 1.0 + b.norm();

  // x = alpha*u + beta*v keeps each hyperplane step at O(nnz(row)).
  Vector u = v.cwiseMax(0.0);
  double alpha = 1.0;
  double beta = 0.0;
  long k = 0;

  HlwbResult res;
  res.status = SolveStatus::max_iter;
  if (cfg.trace) *cfg.trace << "sweep,rel_residual,sigma\n";
  for (long sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    for (int i = 0; i < m; ++i, ++k) {
      const double sigma = cfg.steering(k);
      double au = 0.0;
      for (RowMajorMatrix::InnerIterator it(rows, i); it; ++it) au += it.value() * u[it.col()];
      const double ax = alpha * au + beta * row_dot_v[i];
      const double gamma = (b[i] - ax) / row_norm2[i];
      const double alpha_next = (1.0 - sigma) * alpha;
      if (alpha_next == 0.0) {
        // sigma == 1 collapses the iterate onto v
        u = v;
        alpha = 1.0;
        beta = 0.0;
        continue;
      }
      const double coef = gamma / alpha;
      for (RowMajorMatrix::InnerIterator it(rows, i); it; ++it) u[it.col()] += coef * it.value();
      alpha = alpha_next;
      beta = sigma + (1.0 - sigma) * beta;
    }
    const double sigma = cfg.steering(k);
    ++k;
    Vector xhat = (alpha * u + beta * v).cwiseMax(0.0);
    u = sigma * v + (1.0 - sigma) * xhat;
    alpha = 1.0;
    beta = 0.0;
    // The stopping test uses the nonnegative post-orthant point, before anchor mixing.
    res.x = std::move(xhat);
    res.rel_residual = (p.a() * res.x - b).norm() / denom;
    res.sweeps = sweep;
    if (cfg.trace) {
      *cfg.trace << sweep << ',' << format_sci(res.rel_residual) << ',' << format_sci(sigma)
                 << '\n';
    }
    if (res.rel_residual <= cfg.tol) {
      res.status = SolveStatus::converged;
      break;
    }
    if (cfg.time_limit > 0.0 &&
        std::chrono::duration<double>(clock::now() - start).count() > cfg.time_limit) {
      res.status = SolveStatus::time_limit;
      break;
    }
  }
  res.steps = k;
  return res;
}

}  // namespace bapsolve
