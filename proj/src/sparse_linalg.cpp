#include "bapsolve/sparse_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/OrderingMethods>
#include <Eigen/QR>
#include <Eigen/SparseCholesky>

namespace bapsolve {

void require_finite(const Vector& x, const char* name) {
  if (!x.allFinite()) {
    throw InvalidArgument(std::string(name) + " has non-finite entries");
  }
}

SparseMatrix make_sparse(int rows, int cols, const std::vector<Triplet>& entries) {
  SparseMatrix m(rows, cols);
  for (const auto& t : entries) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols) {
      throw InvalidArgument("triplet index out of range");
    }
  }
  m.setFromTriplets(entries.begin(), entries.end());
  m.prune(0.0, 0.0);
  m.makeCompressed();
  return m;
}

SparseMatrix select_columns(const SparseMatrix& a, std::span<const int> cols) {
  SparseMatrix out(a.rows(), static_cast<int>(cols.size()));
  Eigen::Index nnz = 0;
  for (int j : cols) nnz += a.col(j).nonZeros();
  out.reserve(nnz);
  for (std::size_t k = 0; k < cols.size(); ++k) {
    out.startVec(static_cast<int>(k));
    for (SparseMatrix::InnerIterator it(a, cols[k]); it; ++it) {
      out.insertBack(it.row(), static_cast<int>(k)) = it.value();
    }
  }
  out.finalize();
  return out;
}

Vector column_norms_squared(const SparseMatrix& a) {
  Vector out(a.cols());
  for (int j = 0; j < a.cols(); ++j) out[j] = a.col(j).squaredNorm();
  return out;
}

// ---------------------------------------------------------------------------
// SymmetricMatrix

SymmetricMatrix::SymmetricMatrix(SparseMatrix lower) : lower_(std::move(lower)) {
  if (lower_.rows() != lower_.cols()) throw InvalidArgument("symmetric matrix must be square");
  lower_.makeCompressed();
}

Vector SymmetricMatrix::diagonal() const { return lower_.diagonal(); }

Vector SymmetricMatrix::multiply(const Vector& x) const {
  return lower_.selfadjointView<Eigen::Lower>() * x;
}

DenseMatrix SymmetricMatrix::dense() const {
  DenseMatrix out = DenseMatrix::Zero(dim(), dim());
  for (int j = 0; j < lower_.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(lower_, j); it; ++it) {
      out(it.row(), j) = it.value();
      out(j, it.row()) = it.value();
    }
  }
  return out;
}

SymmetricMatrix assemble_normal_matrix(const SparseMatrix& a, const Vector& weights,
                                       std::span<const int> support) {
  if (weights.size() != a.cols()) {
    throw InvalidArgument("weights length must equal the number of columns");
  }
  const int m = static_cast<int>(a.rows());
  SparseMatrix scaled(m, static_cast<int>(support.size()));
  SparseMatrix plain(m, static_cast<int>(support.size()));
  Eigen::Index nnz = 0;
  for (int j : support) {
    if (j < 0 || j >= a.cols()) {
      throw InvalidSupport("support index " + std::to_string(j) + " out of range");
    }
    const double u = weights[j];
    if (!(u >= 0.0 && u <= 1.0)) throw InvalidArgument("weights must lie in [0, 1]");
    nnz += a.col(j).nonZeros();
  }
  scaled.reserve(nnz);
  plain.reserve(nnz);
  for (std::size_t k = 0; k < support.size(); ++k) {
    const int j = support[k];
    const double u = weights[j];
    scaled.startVec(static_cast<int>(k));
    plain.startVec(static_cast<int>(k));
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      scaled.insertBack(it.row(), static_cast<int>(k)) = u * it.value();
      plain.insertBack(it.row(), static_cast<int>(k)) = it.value();
    }
  }
  scaled.finalize();
  plain.finalize();
  SparseMatrix full = (scaled * SparseMatrix(plain.transpose())).pruned(0.0, 0.0);
  SparseMatrix lower = full.triangularView<Eigen::Lower>();
  return SymmetricMatrix(std::move(lower));
}

// ---------------------------------------------------------------------------
// CholFactor

namespace {

using DenseLlt = Eigen::LLT<DenseMatrix, Eigen::Lower>;
using SparseLlt = Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

}  // namespace

struct CholFactor::Impl {
  std::variant<DenseLlt, std::unique_ptr<SparseLlt>> fac;
};

CholFactor::CholFactor(const SymmetricMatrix& m, double shift)
    : impl_(std::make_unique<Impl>()), dim_(m.dim()), shift_(shift) {
  if (!(shift > 0.0) || !std::isfinite(shift)) {
    throw InvalidArgument("cholesky shift must be positive and finite");
  }
  if (dim_ <= kDenseCutoff) {
    DenseMatrix dense = m.dense();
    dense.diagonal().array() += shift;
    DenseLlt llt(dense);
    if (llt.info() != Eigen::Success) {
      throw NotPositiveDefinite("non-positive pivot in shifted Cholesky (dense)");
    }
    impl_->fac = std::move(llt);
  } else {
    SparseMatrix shifted = m.lower();
    SparseMatrix id(dim_, dim_);
    id.setIdentity();
    shifted += shift * id;
    auto llt = std::make_unique<SparseLlt>();
    llt->compute(shifted);
    if (llt->info() != Eigen::Success) {
      throw NotPositiveDefinite("non-positive pivot in shifted Cholesky (sparse)");
    }
    impl_->fac = std::move(llt);
  }
}

CholFactor::~CholFactor() = default;
CholFactor::CholFactor(CholFactor&&) noexcept = default;
CholFactor& CholFactor::operator=(CholFactor&&) noexcept = default;

bool CholFactor::is_dense() const { return std::holds_alternative<DenseLlt>(impl_->fac); }

Eigen::VectorXi CholFactor::permutation() const {
  if (is_dense()) return Eigen::VectorXi::LinSpaced(dim_, 0, dim_ - 1);
  return std::get<1>(impl_->fac)->permutationP().indices();
}

SparseMatrix CholFactor::factor_lower() const {
  if (is_dense()) {
    DenseMatrix l = std::get<0>(impl_->fac).matrixL();
    return l.sparseView(0.0, 0.0);
  }
  return SparseMatrix(std::get<1>(impl_->fac)->matrixL());
}

Vector CholFactor::solve(const Vector& rhs) const {
  if (rhs.size() != dim_) throw InvalidArgument("rhs length does not match factor");
  if (is_dense()) return std::get<0>(impl_->fac).solve(rhs);
  return std::get<1>(impl_->fac)->solve(rhs);
}

CholFactor cholesky_shifted(const SymmetricMatrix& m, double shift) {
  return CholFactor(m, shift);
}

// ---------------------------------------------------------------------------
// Conjugate gradients

CgResult conjugate_gradient(const LinearOperator& op, const Vector& diagonal, const Vector& rhs,
                            double tol_abs, int max_iter) {
  const Eigen::Index n = rhs.size();
  if (diagonal.size() != n) throw InvalidArgument("preconditioner diagonal has wrong length");
  Vector inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv_diag[i] = diagonal[i] > 0.0 ? 1.0 / diagonal[i] : 1.0;
  }

  CgResult res;
  res.x = Vector::Zero(n);
  Vector r = rhs;
  double rnorm = r.norm();
  if (rnorm <= tol_abs) {
    res.residual_norm = rnorm;
    return res;
  }
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  Vector q(n);
  double rz = r.dot(z);
  int k = 0;
  for (; k < max_iter; ++k) {
    op(p, q);
    const double pq = p.dot(q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    res.x += alpha * p;
    r -= alpha * q;
    rnorm = r.norm();
    if (rnorm <= tol_abs) {
      ++k;
      break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  res.iterations = k;
  op(res.x, q);
  res.residual_norm = (q - rhs).norm();
  return res;
}

// ---------------------------------------------------------------------------
// Rank-revealing helpers

IndexSet independent_columns(const DenseMatrix& a, std::span<const int> candidates, double tol) {
  if (candidates.empty()) return {};
  if (tol <= 0.0) tol = 1e-10;
  DenseMatrix sub(a.rows(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const int j = candidates[k];
    if (j < 0 || j >= a.cols()) throw InvalidSupport("candidate column out of range");
    sub.col(static_cast<Eigen::Index>(k)) = a.col(j);
  }
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(sub);
  const auto& r = qr.matrixQR();
  const Eigen::Index steps = std::min(sub.rows(), sub.cols());
  double largest = 0.0;
  for (Eigen::Index k = 0; k < steps; ++k) largest = std::max(largest, std::abs(r(k, k)));
  IndexSet out;
  if (largest == 0.0) return out;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = 0; k < steps; ++k) {
    if (std::abs(r(k, k)) <= tol * largest) break;
    out.push_back(candidates[static_cast<std::size_t>(perm[k])]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

IndexSet independent_columns(const SparseMatrix& a, std::span<const int> candidates, double tol) {
  if (candidates.empty()) return {};
  for (int j : candidates) {
    if (j < 0 || j >= a.cols()) throw InvalidSupport("candidate column out of range");
  }
  // Work on the selected columns only; the rest of A is never densified.
  DenseMatrix sub = DenseMatrix(select_columns(a, candidates));
  std::vector<int> local(candidates.size());
  for (std::size_t k = 0; k < local.size(); ++k) local[k] = static_cast<int>(k);
  IndexSet picked = independent_columns(sub, local, tol);
  IndexSet out;
  out.reserve(picked.size());
  for (int k : picked) out.push_back(candidates[static_cast<std::size_t>(k)]);
  std::sort(out.begin(), out.end());
  return out;
}

DenseMatrix nullspace_basis(const DenseMatrix& b, double tol) {
  const Eigen::Index n = b.cols();
  if (b.rows() == 0) return DenseMatrix::Identity(n, n);
  // range(B^T) is spanned by the leading rank columns of Q in B^T P = Q R,
  // so the trailing columns span its orthogonal complement null(B).
  Eigen::ColPivHouseholderQR<DenseMatrix> qr(b.transpose());
  qr.setThreshold(tol);
  const Eigen::Index rank = qr.rank();
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(n, n);
  return q.rightCols(n - rank);
}

DenseMatrix nullspace_basis(const SparseMatrix& b, double tol) {
  return nullspace_basis(DenseMatrix(b), tol);
}

Vector least_squares_solve(const DenseMatrix& m, const Vector& rhs) {
  if (m.rows() != rhs.size()) throw InvalidArgument("least squares dimension mismatch");
  if (m.cols() == 0) return Vector::Zero(0);
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(m);
  return cod.solve(rhs);
}

Vector least_squares_solve(const SparseMatrix& m, const Vector& rhs) {
  return least_squares_solve(DenseMatrix(m), rhs);
}

double spectral_norm_estimate(const SparseMatrix& a, int max_iter, double rel_tol,
                              unsigned seed) {
  if (a.nonZeros() == 0) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Vector x(a.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unif(rng);
  x.normalize();
  double sigma = 0.0;
  for (int k = 0; k < max_iter; ++k) {
    Vector ax = a * x;
    Vector atax = a.transpose() * ax;
    const double next = std::sqrt(ax.squaredNorm());
    const double nrm = atax.norm();
    if (nrm == 0.0) return next;
    x = atax / nrm;
    if (k > 0 && std::abs(next - sigma) <= rel_tol * next) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

}  // namespace bapsolve
