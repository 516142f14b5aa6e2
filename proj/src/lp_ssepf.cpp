#include "bapsolve/lp_ssepf.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "bapsolve/sparse_linalg.hpp"

namespace bapsolve {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double initial_radius(const LpProblem& lp) {
  const double bn = lp.b.norm();
  if (bn == 0.0) return 1.0;
  const double est = std::sqrt(static_cast<double>(lp.m()) * lp.n()) * bn / (1.0 + lp.c.norm());
  return std::min(50.0, est);
}

BapProblem scaled_subproblem(const LpProblem& lp, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("radius must be positive and finite");
  return BapProblem(lp.a, lp.b / r, lp.c);
}

double basis_zero_tol(const Vector& w, const Vector& z) {
  const double wn = w.size() ? w.lpNorm<Eigen::Infinity>() : 0.0;
  const double zn = z.size() ? z.lpNorm<Eigen::Infinity>() : 0.0;
  return 1e-11 * (1.0 + wn + zn);
}

Bases classify_bases(const Vector& w, const Vector& z, double zero_tol) {
  if (w.size() != z.size()) throw InvalidArgument("w and z lengths differ");
  Bases out;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const bool in_b = w[i] > zero_tol;
    const bool in_n = z[i] > zero_tol;
    if (in_b && in_n) {
      throw InconsistentCertificate("index " + std::to_string(i) + " has w and z both positive");
    }
    if (in_b) {
      out.basic.push_back(static_cast<int>(i));
    } else if (in_n) {
      out.nonbasic.push_back(static_cast<int>(i));
    } else {
      out.zero.push_back(static_cast<int>(i));
    }
  }
  return out;
}

double ratio_test(const Vector& e, const Vector& f) {
  if (e.size() != f.size()) throw InvalidArgument("ratio vectors differ in length");
  double best = kInf;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    if (e[i] > 0.0 && f[i] > 0.0) best = std::min(best, f[i] / e[i]);
  }
  return best;
}

StoneStep next_stone(const LpProblem& lp, const SsepfState& st, bool augment_with_zero) {
  const int m = lp.m();
  const double r = st.r;
  IndexSet basic = st.bases.basic;
  IndexSet zero = st.bases.zero;
  if (augment_with_zero) {
    basic.insert(basic.end(), zero.begin(), zero.end());
    std::sort(basic.begin(), basic.end());
    zero.clear();
  }
  const IndexSet& nonbasic = st.bases.nonbasic;

  const DenseMatrix ab = DenseMatrix(select_columns(lp.a, basic));
  const DenseMatrix normal = ab * ab.transpose();
  DenseMatrix vz;
  if (zero.empty()) {
    vz = DenseMatrix::Identity(m, m);
  } else {
    vz = nullspace_basis(DenseMatrix(select_columns(lp.a, zero)).transpose());
  }

  StoneStep out;
  if (vz.cols() == 0) {
    out.dy_p = Vector::Zero(m);
  } else {
    out.dy_p = vz * least_squares_solve(DenseMatrix(normal * vz), lp.b);
  }
  const double scale = lp.b.norm() + normal.norm() * out.dy_p.norm();
  if ((normal * out.dy_p - lp.b).norm() > 1e-8 * std::max(scale, 1e-300)) {
    throw SensitivityFailure("restricted sensitivity system is inconsistent");
  }

  const Vector b_b = ab.transpose() * out.dy_p;
  const Vector b_n = DenseMatrix(select_columns(lp.a, nonbasic)).transpose() * out.dy_p;
  const auto nb = static_cast<Eigen::Index>(basic.size());
  const auto nn = static_cast<Eigen::Index>(nonbasic.size());
  out.e.resize(nb + nn);
  out.f.resize(nb + nn);
  for (Eigen::Index k = 0; k < nb; ++k) {
    const double w = st.w[basic[static_cast<std::size_t>(k)]];
    double e = b_b[k] - r * w;
    // e_B vanishes exactly when A_B has full column rank; keep roundoff out of the ratio test
    if (std::abs(e) <= 1e-9 * (std::abs(b_b[k]) + r * std::abs(w))) e = 0.0;
    out.e[k] = e;
    out.f[k] = r * b_b[k];
  }
  for (Eigen::Index k = 0; k < nn; ++k) {
    const double z = st.z[nonbasic[static_cast<std::size_t>(k)]];
    double e = -(b_n[k] + r * z);
    if (std::abs(e) <= 1e-9 * (std::abs(b_n[k]) + r * std::abs(z))) e = 0.0;
    out.e[nb + k] = e;
    out.f[nb + k] = -r * b_n[k];
  }
  out.r_next = ratio_test(out.e, out.f);

  const double coef = (std::isinf(out.r_next) ? 0.0 : 1.0 / out.r_next) - 1.0 / r;
  out.dy = coef * out.dy_p;
  out.dw_b = coef * b_b;
  out.dz_n = -coef * b_n;
  return out;
}

double LpCertificate::gap() const {
  if (!std::isfinite(upper) || !std::isfinite(lower)) return kInf;
  return (upper - lower) / (1.0 + (std::abs(upper) + std::abs(lower)) / 2.0);
}

LpCertificate lp_bounds(const LpProblem& lp, const SsepfState& st, const RnnmConfig& dual_cfg) {
  const int m = lp.m();
  const int n = lp.n();
  LpCertificate cert;
  cert.x = st.r * st.w;
  cert.lower = lp.c.dot(cert.x);

  // Nearest (y_lp, z_lp) to (-y, z) with A^T y_lp - z_lp = c, y_lp free, z_lp >= 0.
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(lp.a.nonZeros() + n));
  for (int j = 0; j < n; ++j) {
    for (SparseMatrix::InnerIterator it(lp.a, j); it; ++it) t.emplace_back(j, it.row(), it.value());
    t.emplace_back(j, m + j, -1.0);
  }
  SparseMatrix d(n, m + n);
  d.setFromTriplets(t.begin(), t.end());
  d.makeCompressed();
  Vector anchor(m + n);
  anchor.head(m) = -st.y;
  anchor.tail(n) = st.z;
  std::vector<Sign> signs(static_cast<std::size_t>(m + n), Sign::nonnegative);
  for (int i = 0; i < m; ++i) signs[static_cast<std::size_t>(i)] = Sign::free;

  cert.upper = kInf;
  cert.upper_failed = true;
  try {
    const BapProblem dual(std::move(d), lp.c, std::move(anchor), std::move(signs));
    const BapSolution sol = solve_rnnm(dual, Vector(), dual_cfg);
    cert.y_lp = sol.x.head(m);
    cert.z_lp = sol.x.tail(n);
    if (sol.converged()) {
      cert.upper = lp.b.dot(cert.y_lp);
      cert.upper_failed = false;
    }
  } catch (const InvalidArgument&) {
    cert.y_lp = Vector::Zero(m);
    cert.z_lp = Vector::Zero(n);
  }

  cert.primal_residual = (lp.a * cert.x - lp.b).norm() / (1.0 + lp.b.norm());
  cert.dual_residual =
      (cert.z_lp - lp.a.transpose() * cert.y_lp + lp.c).norm() / (1.0 + lp.c.norm());
  cert.comp_residual =
      std::abs(cert.x.dot(cert.z_lp)) / (1.0 + std::max(cert.x.norm(), cert.z_lp.norm()));
  return cert;
}

std::string to_string(LpSolveStatus s) {
  switch (s) {
    case LpSolveStatus::optimal: return "optimal";
    case LpSolveStatus::stone_limit: return "stone_limit";
    case LpSolveStatus::subproblem_failure: return "subproblem_failure";
    case LpSolveStatus::time_limit: return "time_limit";
  }
  return "unknown";
}

std::string LpSolveResult::report() const {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  };
  nlohmann::json j;
  j["status"] = to_string(status);
  j["stones"] = stones.size();
  j["degenerate"] = degenerate;
  j["objective"] = num(cert.lower);
  j["lower"] = num(cert.lower);
  j["upper"] = num(cert.upper);
  j["gap"] = num(cert.gap());
  j["residuals"] = {{"primal", num(cert.primal_residual)},
                    {"dual", num(cert.dual_residual)},
                    {"comp", num(cert.comp_residual)}};
  nlohmann::json rs = nlohmann::json::array();
  nlohmann::json per = nlohmann::json::array();
  for (const auto& s : stones) {
    rs.push_back(num(s.r));
    per.push_back({{"index", s.index},
                   {"R", num(s.r)},
                   {"R_next", num(s.r_next)},
                   {"iterations", s.iterations},
                   {"B", s.num_basic},
                   {"N", s.num_nonbasic},
                   {"Z", s.num_zero},
                   {"w_norm", num(s.w_norm)},
                   {"dual_zb", num(s.dual_zb)},
                   {"gap", num(s.gap)}});
  }
  j["R"] = rs;
  j["per_stone"] = per;
  if (!message.empty()) j["message"] = message;
  return j.dump(2);
}

LpSolveResult solve_lp(const LpProblem& lp, const SsepfConfig& cfg) {
  lp.validate();
  if (cfg.max_stones < 1) throw InvalidArgument("max_stones must be positive");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();

  LpSolveResult res;
  double r = initial_radius(lp);
  Vector y_warm = Vector::Zero(lp.m());
  int flat_count = 0;
  for (int stone = 1; stone <= cfg.max_stones; ++stone) {
    RnnmConfig sub = cfg.sub;
    if (cfg.time_limit > 0.0) {
      const double used = std::chrono::duration<double>(clock::now() - start).count();
      if (used > cfg.time_limit) {
        res.status = LpSolveStatus::time_limit;
        return res;
      }
      sub.time_limit = cfg.time_limit - used;
    }
    const BapProblem bap = scaled_subproblem(lp, r);
    const BapSolution sol = solve_rnnm(bap, y_warm, sub);
    if (!sol.converged()) {
      res.status = LpSolveStatus::subproblem_failure;
      res.message = "subproblem at stone " + std::to_string(stone) + " ended with status " +
                    to_string(sol.status);
      return res;
    }
    SsepfState st;
    st.r = r;
    st.w = sol.x;
    st.y = sol.y;
    st.z = sol.z;
    st.stone_count = stone;
    st.bases = classify_bases(st.w, st.z, basis_zero_tol(st.w, st.z));
    if (!st.bases.zero.empty()) res.degenerate = true;

    res.cert = lp_bounds(lp, st, cfg.sub);
    StoneRecord rec;
    rec.index = stone;
    rec.r = r;
    rec.iterations = sol.iterations;
    rec.num_basic = static_cast<int>(st.bases.basic.size());
    rec.num_nonbasic = static_cast<int>(st.bases.nonbasic.size());
    rec.num_zero = static_cast<int>(st.bases.zero.size());
    rec.w_norm = st.w.norm();
    rec.lower = res.cert.lower;
    rec.upper = res.cert.upper;
    rec.gap = res.cert.gap();

    double r_new;
    StoneStep step;
    bool have_step = false;
    try {
      step = next_stone(lp, st, cfg.augment_with_zero);
      have_step = true;
      rec.r_next = step.r_next;
    } catch (const SensitivityFailure&) {
      rec.sensitivity_failed = true;
      rec.r_next = 10.0 * r;
    }
    // Far or infinite next stone: the bases hold along an affine-in-1/R path, so
    // bound with its endpoint as R -> inf as well.
    if (have_step && rec.gap > cfg.tol_gap && step.r_next > 1e6 * r) {
      SsepfState lim = st;
      lim.y = st.y - step.dy_p / r;
      lim.z = (-(lp.c + lp.a.transpose() * lim.y)).cwiseMax(0.0);
      LpCertificate alt = lp_bounds(lp, lim, cfg.sub);
      if (alt.gap() < rec.gap) {
        res.cert = std::move(alt);
        rec.upper = res.cert.upper;
        rec.gap = res.cert.gap();
      }
    }
    rec.dual_zb = 0.0;
    if (res.cert.z_lp.size() == lp.n()) {
      for (int i : st.bases.basic) rec.dual_zb = std::max(rec.dual_zb, std::abs(res.cert.z_lp[i]));
    }
    res.stones.push_back(rec);

    if (rec.gap <= cfg.tol_gap || (have_step && std::isinf(step.r_next))) {
      res.status = LpSolveStatus::optimal;
      if (rec.gap > cfg.tol_gap) res.message = "bases fixed but gap above tolerance";
      return res;
    }

    if (!have_step) {
      r_new = 10.0 * r;
      y_warm = st.y;
    } else {
      flat_count = step.r_next - r < 1e-12 * r ? flat_count + 1 : 0;
      if (flat_count >= 3) {
        r_new = 10.0 * r;
        flat_count = 0;
      } else {
        r_new = step.r_next * (1.0 + std::max(1e-8, 1e-2 / stone));
      }
      y_warm = st.y + (1.0 / r_new - 1.0 / r) * step.dy_p;
    }
    r = r_new;
  }
  res.status = LpSolveStatus::stone_limit;
  res.message = "stone budget exhausted";
  return res;
}

}  // namespace bapsolve
