#pragma once

#include <functional>
#include <memory>
#include <span>

#include "bapsolve/types.hpp"

namespace bapsolve {

/// Builds a compressed matrix from triplets. Duplicates are summed and
/// entries that end up exactly zero are dropped.
SparseMatrix make_sparse(int rows, int cols, const std::vector<Triplet>& entries);

/// Copies the listed columns of `a` (in the given order) into a new matrix.
SparseMatrix select_columns(const SparseMatrix& a, std::span<const int> cols);

/// Squared Euclidean norm of every column.
Vector column_norms_squared(const SparseMatrix& a);

/// Symmetric matrix held as its lower triangle. Products and dense views
/// mirror the stored triangle, so the represented matrix is symmetric to the bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(SparseMatrix lower);

  int dim() const { return static_cast<int>(lower_.rows()); }
  const SparseMatrix& lower() const { return lower_; }

  Vector diagonal() const;
  Vector multiply(const Vector& x) const;
  DenseMatrix dense() const;

 private:
  SparseMatrix lower_;
};

/// Sum over `support` of weights[i] * A_i A_i^T, an m x m matrix.
/// `weights` is indexed by column of `a` (length ncols). Throws InvalidSupport
/// for out-of-range indices and InvalidArgument for weights outside [0, 1].
SymmetricMatrix assemble_normal_matrix(const SparseMatrix& a, const Vector& weights,
                                       std::span<const int> support);

/// Cholesky factor of M + shift*I. Small systems (dim <= kDenseCutoff) use a
/// dense factorization; larger ones a sparse LL^T with approximate minimum
/// degree ordering.
class CholFactor {
 public:
  static constexpr int kDenseCutoff = 256;

  CholFactor(const SymmetricMatrix& m, double shift);
  ~CholFactor();
  CholFactor(CholFactor&&) noexcept;
  CholFactor& operator=(CholFactor&&) noexcept;

  int dim() const { return dim_; }
  double shift() const { return shift_; }
  bool is_dense() const;

  /// Fill-reducing permutation P, with P (M + shift I) P^T = L L^T.
  /// Entry i is the row of P holding a one in column i. Identity for the dense path.
  Eigen::VectorXi permutation() const;
  SparseMatrix factor_lower() const;

  Vector solve(const Vector& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int dim_ = 0;
  double shift_ = 0.0;
};

/// Factors M + shift*I. Throws InvalidArgument when shift <= 0 and
/// NotPositiveDefinite when a pivot is not positive.
CholFactor cholesky_shifted(const SymmetricMatrix& m, double shift);

/// y = M x for a symmetric positive definite operator.
using LinearOperator = std::function<void(const Vector& x, Vector& y)>;

struct CgResult {
  Vector x;
  double residual_norm = 0.0;  // ||M x - rhs||, recomputed at exit
  int iterations = 0;
};

/// Jacobi-preconditioned conjugate gradients. Stops when the recursive
/// residual drops to tol_abs or after max_iter iterations; the caller decides
/// what to do with an unconverged result.
CgResult conjugate_gradient(const LinearOperator& op, const Vector& diagonal, const Vector& rhs,
                            double tol_abs, int max_iter);

/// Maximal linearly independent subset of `candidates`, chosen by QR with
/// column pivoting. A pivot below tol * (largest pivot) marks dependence.
/// Pass tol <= 0 for the default 1e-10. Result is sorted ascending.
IndexSet independent_columns(const SparseMatrix& a, std::span<const int> candidates,
                             double tol = 0.0);
IndexSet independent_columns(const DenseMatrix& a, std::span<const int> candidates,
                             double tol = 0.0);

/// Orthonormal basis of null(B) as the columns of the result. A B with zero
/// rows yields the identity.
DenseMatrix nullspace_basis(const DenseMatrix& b, double tol = 1e-12);
DenseMatrix nullspace_basis(const SparseMatrix& b, double tol = 1e-12);

/// Minimum-norm least-squares solution of M x ~ rhs.
Vector least_squares_solve(const DenseMatrix& m, const Vector& rhs);
Vector least_squares_solve(const SparseMatrix& m, const Vector& rhs);

/// Spectral norm estimate by power iteration on A^T A.
double spectral_norm_estimate(const SparseMatrix& a, int max_iter = 50, double rel_tol = 1e-6,
                              unsigned seed = 12345);

}  // namespace bapsolve
