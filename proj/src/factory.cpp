#include "bapsolve/factory.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace bapsolve {

std::string to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::nondegenerate: return "nondegenerate";
    case Degeneracy::degenerate: return "degenerate";
    case Degeneracy::non_vertex: return "non_vertex";
  }
  return "unknown";
}

Degeneracy parse_degeneracy(const std::string& s) {
  if (s == "nondegenerate") return Degeneracy::nondegenerate;
  if (s == "degenerate") return Degeneracy::degenerate;
  if (s == "non_vertex" || s == "non-vertex") return Degeneracy::non_vertex;
  throw InvalidArgument("unknown degeneracy '" + s + "'");
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

void GenSpec::validate() const {
  if (m < 1 || n < 1) throw InvalidArgument("m and n must be positive");
  if (m >= n) throw InvalidArgument("generator needs m < n");
  if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("density must lie in (0, 1]");
  if (!(anchor_norm > 0.0) || !std::isfinite(anchor_norm)) {
    throw InvalidArgument("anchor_norm must be positive");
  }
}

namespace {

using Rng = std::mt19937_64;

constexpr int kMaxRetries = 100;
constexpr double kMaxBasisCond = 1e6;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

SparseMatrix sample_matrix(int m, int n, double density, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int per_col = std::clamp(static_cast<int>(std::lround(density * m)), 1, m);
  std::vector<int> rows(static_cast<std::size_t>(m));
  std::iota(rows.begin(), rows.end(), 0);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(per_col) * static_cast<std::size_t>(n) + m);
  std::vector<char> row_hit(static_cast<std::size_t>(m), 0);
  auto draw = [&] {
    double x = 0.0;
    while (x == 0.0) x = normal(rng);
    return x;
  };
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < per_col; ++k) {
      const int pick = uniform_int(rng, k, m - 1);
      std::swap(rows[static_cast<std::size_t>(k)], rows[static_cast<std::size_t>(pick)]);
      const int r = rows[static_cast<std::size_t>(k)];
      entries.emplace_back(r, j, draw());
      row_hit[static_cast<std::size_t>(r)] = 1;
    }
  }
  // repair pass: every row gets at least one entry
  for (int i = 0; i < m; ++i) {
    if (!row_hit[static_cast<std::size_t>(i)]) entries.emplace_back(i, uniform_int(rng, 0, n - 1), draw());
  }
  SparseMatrix a(m, n);
  a.setFromTriplets(entries.begin(), entries.end());
  a.prune(0.0, 0.0);
  a.makeCompressed();
  return a;
}

SparseMatrix scale_to_unit_norm(SparseMatrix a) {
  const double s = spectral_norm_estimate(a, 50, 1e-6);
  if (s > 0.0) a /= s;
  return a;
}

// Random-order augmenting paths; returns the matched column of each row or
// an empty vector when no perfect row matching exists.
std::vector<int> random_row_matching(const SparseMatrix& a, Rng& rng) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  const RowMajorMatrix r = a;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (RowMajorMatrix::InnerIterator it(r, i); it; ++it) adj[static_cast<std::size_t>(i)].push_back(it.col());
    std::shuffle(adj[static_cast<std::size_t>(i)].begin(), adj[static_cast<std::size_t>(i)].end(), rng);
  }
  std::vector<int> col_owner(static_cast<std::size_t>(n), -1);
  std::vector<int> row_match(static_cast<std::size_t>(m), -1);
  std::vector<int> visited(static_cast<std::size_t>(n), -1);
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::function<bool(int, int)> augment = [&](int row, int stamp) {
    for (int c : adj[static_cast<std::size_t>(row)]) {
      if (visited[static_cast<std::size_t>(c)] == stamp) continue;
      visited[static_cast<std::size_t>(c)] = stamp;
      const int owner = col_owner[static_cast<std::size_t>(c)];
      if (owner < 0 || augment(owner, stamp)) {
        col_owner[static_cast<std::size_t>(c)] = row;
        row_match[static_cast<std::size_t>(row)] = c;
        return true;
      }
    }
    return false;
  };
  for (int k = 0; k < m; ++k) {
    if (!augment(order[static_cast<std::size_t>(k)], k)) return {};
  }
  return row_match;
}

double dense_condition(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s[s.size() - 1];
  return smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
}

struct VertexDraw {
  SparseMatrix a;
  IndexSet basis;
};

// Matrix plus a well-conditioned basis found by structural matching.
VertexDraw draw_matrix_and_basis(const GenSpec& spec, Rng& rng) {
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    SparseMatrix a = scale_to_unit_norm(sample_matrix(spec.m, spec.n, spec.density, rng));
    for (int tries = 0; tries < 4; ++tries) {
      std::vector<int> match = random_row_matching(a, rng);
      if (match.empty()) break;
      IndexSet basis(match.begin(), match.end());
      std::sort(basis.begin(), basis.end());
      const DenseMatrix ab = DenseMatrix(select_columns(a, basis));
      Eigen::FullPivLU<DenseMatrix> lu(ab);
      if (lu.rank() != spec.m) continue;
      if (dense_condition(ab) > kMaxBasisCond) continue;
      return {std::move(a), std::move(basis)};
    }
  }
  throw GenerationError("no well-conditioned full-rank basis after " +
                        std::to_string(kMaxRetries) + " retries");
}

IndexSet complement(int n, const IndexSet& s) {
  IndexSet out;
  std::size_t k = 0;
  for (int j = 0; j < n; ++j) {
    if (k < s.size() && s[k] == j) {
      ++k;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

}  // namespace

SparseMatrix random_constraint_matrix(int m, int n, double density, std::uint64_t seed) {
  if (m < 1 || n < 1) throw InvalidArgument("matrix dimensions must be positive");
  if (!(density > 0.0 && density <= 1.0)) throw InvalidArgument("density must lie in (0, 1]");
  Rng rng(seed);
  return scale_to_unit_norm(sample_matrix(m, n, density, rng));
}

GeneratedBap gen_bap_with_known_vertex(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VertexDraw draw = draw_matrix_and_basis(spec, rng);
  const int n = spec.n;

  IndexSet support = draw.basis;
  if (spec.degeneracy == Degeneracy::non_vertex) {
    IndexSet rest = complement(n, support);
    std::shuffle(rest.begin(), rest.end(), rng);
    const int extra = std::clamp(spec.m / 10, 1, static_cast<int>(rest.size()));
    support.insert(support.end(), rest.begin(), rest.begin() + extra);
    std::sort(support.begin(), support.end());
  }
  const IndexSet inactive = complement(n, support);

  Vector x = Vector::Zero(n);
  for (int j : support) x[j] = uniform(rng, 0.5, 1.5);
  x *= 0.5 * spec.anchor_norm / x.norm();

  Vector u(spec.m);
  for (int i = 0; i < spec.m; ++i) u[i] = normal(rng);
  Vector z = Vector::Zero(n);
  for (int j : inactive) z[j] = uniform(rng, 0.5, 1.5);
  if (spec.degeneracy == Degeneracy::degenerate && !inactive.empty()) {
    IndexSet pick = inactive;
    std::shuffle(pick.begin(), pick.end(), rng);
    const std::size_t count = std::max<std::size_t>(1, pick.size() / 4);
    for (std::size_t k = 0; k < count; ++k) z[pick[k]] = 0.0;
  }

  // ||x - s w|| = anchor_norm has exactly one positive root since ||x|| < anchor_norm.
  const Vector w = draw.a.transpose() * u + z;
  const double ww = w.squaredNorm();
  if (!(ww > 0.0)) throw GenerationError("degenerate polar cone direction");
  const double xw = x.dot(w);
  const double r2 = spec.anchor_norm * spec.anchor_norm - x.squaredNorm();
  const double s = (xw + std::sqrt(xw * xw + ww * r2)) / ww;

  Vector v = x - s * w;
  Vector b = draw.a * x;
  GeneratedBap out{BapProblem(draw.a, std::move(b), std::move(v)), x, s * u, s * z, support};
  return out;
}

GeneratedLp gen_lp(const GenSpec& spec) {
  spec.validate();
  if (spec.degeneracy == Degeneracy::non_vertex) {
    throw InvalidArgument("gen_lp supports nondegenerate or degenerate modes");
  }
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  VertexDraw draw = draw_matrix_and_basis(spec, rng);
  int n = spec.n;

  Vector x = Vector::Zero(n);
  for (int j : draw.basis) x[j] = uniform(rng, 0.5, 1.5);
  x /= x.norm();
  Vector u(spec.m);
  for (int i = 0; i < spec.m; ++i) u[i] = normal(rng);
  Vector z = Vector::Zero(n);
  for (int j : complement(n, draw.basis)) z[j] = uniform(rng, 0.5, 1.5);
  Vector c = draw.a.transpose() * u - z;
  const double scale = c.norm();
  c /= scale;
  u /= scale;

  SparseMatrix a = std::move(draw.a);
  if (spec.degeneracy == Degeneracy::degenerate) {
    const int dup = draw.basis[static_cast<std::size_t>(uniform_int(rng, 0, spec.m - 1))];
    SparseMatrix wider(a.rows(), n + 1);
    std::vector<Triplet> t;
    for (int j = 0; j < n; ++j) {
      for (SparseMatrix::InnerIterator it(a, j); it; ++it) t.emplace_back(it.row(), j, it.value());
    }
    for (SparseMatrix::InnerIterator it(a, dup); it; ++it) t.emplace_back(it.row(), n, it.value());
    wider.setFromTriplets(t.begin(), t.end());
    wider.makeCompressed();
    a = std::move(wider);
    c.conservativeResize(n + 1);
    c[n] = c[dup];
    x.conservativeResize(n + 1);
    x[n] = 0.0;
    ++n;
  }

  GeneratedLp out;
  out.problem.b = a * x;
  out.problem.a = std::move(a);
  out.problem.c = c;
  out.known_optimum = c.dot(x);
  out.known_x = x;
  out.y = u;
  out.basis = draw.basis;
  return out;
}

TriangleSpec read_edge_list(std::istream& in) {
  TriangleSpec spec;
  std::string line;
  int lineno = 0;
  bool have_count = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    if (!have_count) {
      if (!(ss >> spec.num_vertices)) continue;
      if (spec.num_vertices < 0) throw ParseError("negative vertex count", lineno);
      have_count = true;
      continue;
    }
    int u, v;
    if (!(ss >> u)) continue;
    if (!(ss >> v)) throw ParseError("edge needs two endpoints", lineno);
    if (u < 0 || v < 0 || u >= spec.num_vertices || v >= spec.num_vertices || u == v) {
      throw ParseError("bad edge " + std::to_string(u) + " " + std::to_string(v), lineno);
    }
    spec.edges.emplace_back(u, v);
  }
  if (!have_count) throw ParseError("edge list is missing the vertex count", lineno);
  return spec;
}

TriangleBap build_triangle_bap(const TriangleSpec& spec, const Vector& xbar) {
  const int nv = spec.num_vertices;
  if (nv < 0) throw InvalidArgument("vertex count must be nonnegative");
  std::vector<std::pair<int, int>> edges;
  if (spec.edges.empty()) {
    for (int a = 0; a < nv; ++a) {
      for (int b = a + 1; b < nv; ++b) edges.emplace_back(a, b);
    }
  } else {
    for (auto [a, b] : spec.edges) {
      if (a < 0 || b < 0 || a >= nv || b >= nv || a == b) {
        throw InvalidArgument("edge endpoint out of range");
      }
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  std::map<std::pair<int, int>, int> edge_id;
  for (std::size_t k = 0; k < edges.size(); ++k) edge_id[edges[k]] = static_cast<int>(k);

  std::vector<std::array<int, 3>> triples;
  if (spec.triples.empty()) {
    for (int a = 0; a < nv; ++a) {
      for (int b = a + 1; b < nv; ++b) {
        for (int c = b + 1; c < nv; ++c) {
          if (edge_id.count({a, b}) && edge_id.count({a, c}) && edge_id.count({b, c})) {
            triples.push_back({a, b, c});
          }
        }
      }
    }
  } else {
    triples = spec.triples;
    for (const auto& t : triples) {
      if (!(t[0] < t[1] && t[1] < t[2])) throw InvalidArgument("triple must satisfy u < v < w");
      if (!edge_id.count({t[0], t[1]}) || !edge_id.count({t[0], t[2]}) ||
          !edge_id.count({t[1], t[2]})) {
        throw InvalidArgument("triple references a missing edge");
      }
    }
  }

  const int ne = static_cast<int>(edges.size());
  const int nt = static_cast<int>(triples.size());
  if (xbar.size() != ne) throw InvalidArgument("xbar length must equal the number of edges");
  require_finite(xbar, "xbar");
  if (ne == 0) throw InvalidArgument("graph has no edges");
  const int rows_t = 3 * nt;
  const int m = rows_t + ne;
  const int n = ne + rows_t + ne;

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(9 * nt + 2 * ne + rows_t));
  for (int k = 0; k < nt; ++k) {
    const auto& tr = triples[static_cast<std::size_t>(k)];
    const int uv = edge_id[{tr[0], tr[1]}];
    const int uw = edge_id[{tr[0], tr[2]}];
    const int vw = edge_id[{tr[1], tr[2]}];
    const std::array<std::array<int, 3>, 3> pattern = {{{vw, uv, uw}, {uw, uv, vw}, {uv, uw, vw}}};
    for (int r = 0; r < 3; ++r) {
      const int row = 3 * k + r;
      t.emplace_back(row, pattern[static_cast<std::size_t>(r)][0], 1.0);
      t.emplace_back(row, pattern[static_cast<std::size_t>(r)][1], -1.0);
      t.emplace_back(row, pattern[static_cast<std::size_t>(r)][2], -1.0);
      t.emplace_back(row, ne + row, 1.0);
    }
  }
  for (int e = 0; e < ne; ++e) {
    t.emplace_back(rows_t + e, e, 1.0);
    t.emplace_back(rows_t + e, ne + rows_t + e, 1.0);
  }
  SparseMatrix a(m, n);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();

  Vector b = Vector::Zero(m);
  b.tail(ne).setOnes();
  Vector v(n);
  v.head(ne) = xbar;
  const SparseMatrix tx = a.topLeftCorner(rows_t, ne);
  v.segment(ne, rows_t) = -(tx * xbar);
  v.tail(ne) = Vector::Ones(ne) - xbar;
  return TriangleBap{BapProblem(std::move(a), std::move(b), std::move(v)), std::move(edges),
                     std::move(triples)};
}

namespace {

constexpr double kFeasTol = 1e-9;

bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

}  // namespace

LpOracleResult oracle_lp_vertex_enumeration(const LpProblem& lp) {
  lp.validate();
  const int m = lp.m();
  const int n = lp.n();
  if (n > 20) throw InvalidArgument("vertex enumeration needs n <= 20");
  const DenseMatrix a = DenseMatrix(lp.a);
  Eigen::FullPivLU<DenseMatrix> full(a);
  const int rank = static_cast<int>(full.rank());
  const double btol = kFeasTol * (1.0 + lp.b.norm());

  LpOracleResult best;
  best.status = LpStatus::infeasible;
  best.value = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<int>& cols) {
    DenseMatrix sub(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    Vector xs;
    if (cols.size() == static_cast<std::size_t>(m)) {
      Eigen::FullPivLU<DenseMatrix> lu(sub);
      if (lu.rank() < m) return;
      xs = lu.solve(lp.b);
    } else {
      Eigen::ColPivHouseholderQR<DenseMatrix> qr(sub);
      if (qr.rank() < static_cast<Eigen::Index>(cols.size())) return;
      xs = qr.solve(lp.b);
    }
    if ((sub * xs - lp.b).norm() > btol) return;
    if (xs.size() && xs.minCoeff() < -kFeasTol) return;
    Vector x = Vector::Zero(n);
    for (std::size_t k = 0; k < cols.size(); ++k) x[cols[k]] = std::max(0.0, xs[static_cast<Eigen::Index>(k)]);
    const double val = lp.c.dot(x);
    if (best.status != LpStatus::optimal || val > best.value) {
      best.status = LpStatus::optimal;
      best.value = val;
      best.x = x;
    }
  };
  const int lo = rank == m ? m : 0;
  const int hi = std::min(rank, n);
  for (int k = lo; k <= hi; ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    do {
      consider(idx);
    } while (k > 0 && next_combination(idx, n));
  }
  if (best.status != LpStatus::optimal) best.value = 0.0;
  return best;
}

namespace {

class Tableau {
 public:
  Tableau(const DenseMatrix& a, const Vector& b) : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())) {
    t_ = DenseMatrix::Zero(m_, n_ + m_ + 1);
    t_.leftCols(n_) = a;
    t_.block(0, n_, m_, m_).setIdentity();
    t_.col(n_ + m_) = b;
    for (int i = 0; i < m_; ++i) {
      if (b[i] < 0.0) t_.row(i) *= -1.0;
    }
    basis_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) basis_[static_cast<std::size_t>(i)] = n_ + i;
    active_.assign(static_cast<std::size_t>(m_), 1);
  }

  int cols() const { return n_ + m_; }
  const std::vector<int>& basis() const { return basis_; }
  bool row_active(int i) const { return active_[static_cast<std::size_t>(i)] != 0; }
  double rhs(int i) const { return t_(i, n_ + m_); }

  // Maximizes cost over columns < limit. Returns false when unbounded.
  bool optimize(const Vector& cost, int limit) {
    const double pivot_tol = 1e-9;
    for (int guard = 0; guard < 100000; ++guard) {
      int enter = -1;
      for (int j = 0; j < limit; ++j) {
        if (is_basic(j)) continue;
        double red = cost[j];
        for (int i = 0; i < m_; ++i) {
          if (row_active(i)) red -= cost[basis_[static_cast<std::size_t>(i)]] * t_(i, j);
        }
        if (red > 1e-10) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (!row_active(i) || t_(i, enter) <= pivot_tol) continue;
        const double ratio = rhs(i) / t_(i, enter);
        if (ratio < best - 1e-12 ||
            (std::abs(ratio - best) <= 1e-12 && leave >= 0 &&
             basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw Error("reference simplex exceeded its pivot budget");
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < m_; ++i) {
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Pivots artificial columns out of the basis; rows that cannot be pivoted are redundant.
  void expel_artificials() {
    for (int i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      int col = -1;
      for (int j = 0; j < n_; ++j) {
        if (!is_basic(j) && std::abs(t_(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        pivot(i, col);
      } else {
        active_[static_cast<std::size_t>(i)] = 0;
      }
    }
  }

 private:
  bool is_basic(int j) const {
    for (int i = 0; i < m_; ++i) {
      if (row_active(i) && basis_[static_cast<std::size_t>(i)] == j) return true;
    }
    return false;
  }

  int m_;
  int n_;
  DenseMatrix t_;
  std::vector<int> basis_;
  std::vector<char> active_;
};

}  // namespace

LpOracleResult reference_simplex(const LpProblem& lp) {
  lp.validate();
  const int m = lp.m();
  const int n = lp.n();
  const DenseMatrix a = DenseMatrix(lp.a);
  Tableau tab(a, lp.b);

  Vector phase1 = Vector::Zero(n + m);
  phase1.tail(m).setConstant(-1.0);
  tab.optimize(phase1, n + m);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[static_cast<std::size_t>(i)] >= n) infeas += std::abs(tab.rhs(i));
  }
  LpOracleResult res;
  if (infeas > kFeasTol * (1.0 + lp.b.norm())) {
    res.status = LpStatus::infeasible;
    return res;
  }
  tab.expel_artificials();

  Vector phase2 = Vector::Zero(n + m);
  phase2.head(n) = lp.c;
  if (!tab.optimize(phase2, n)) {
    res.status = LpStatus::unbounded;
    res.value = std::numeric_limits<double>::infinity();
    return res;
  }

  // Recompute the basic values from the original data to shed pivoting error.
  IndexSet basic;
  std::vector<int> rows;
  for (int i = 0; i < m; ++i) {
    if (tab.row_active(i)) {
      basic.push_back(tab.basis()[static_cast<std::size_t>(i)]);
      rows.push_back(i);
    }
  }
  DenseMatrix ab(m, static_cast<Eigen::Index>(basic.size()));
  for (std::size_t k = 0; k < basic.size(); ++k) ab.col(static_cast<Eigen::Index>(k)) = a.col(basic[k]);
  const Vector xb = Eigen::ColPivHouseholderQR<DenseMatrix>(ab).solve(lp.b);
  res.x = Vector::Zero(n);
  for (std::size_t k = 0; k < basic.size(); ++k) res.x[basic[k]] = std::max(0.0, xb[static_cast<Eigen::Index>(k)]);
  res.status = LpStatus::optimal;
  res.value = lp.c.dot(res.x);
  return res;
}

void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries) {
  out << "# seed kind path\n";
  for (const auto& e : entries) out << e.seed << ' ' << e.kind << ' ' << e.path << '\n';
}

std::vector<ManifestEntry> read_manifest(std::istream& in) {
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    ManifestEntry e;
    if (!(ss >> e.seed >> e.kind >> e.path)) throw ParseError("bad manifest line", lineno);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace bapsolve
