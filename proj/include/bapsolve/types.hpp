#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace bapsolve {

/// Compressed sparse column storage. Row indices are sorted within each
/// column once the matrix is compressed.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using RowMajorMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using Triplet = Eigen::Triplet<double, int>;

/// Sorted list of 0-based column (or row) indices.
using IndexSet = std::vector<int>;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class InvalidSupport : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class SensitivityFailure : public Error {
 public:
  using Error::Error;
};

class InconsistentCertificate : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Raised for malformed input files. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const Vector& x, const char* name);

}  // namespace bapsolve
