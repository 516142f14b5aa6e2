#pragma once

#include "bapsolve/types.hpp"

namespace bapsolve {

/// max c^T x  s.t.  Ax = b, x >= 0
struct LpProblem {
  SparseMatrix a;
  Vector b;
  Vector c;

  int m() const { return static_cast<int>(a.rows()); }
  int n() const { return static_cast<int>(a.cols()); }

  /// Throws InvalidArgument on dimension mismatch or non-finite data.
  void validate() const;
};

}  // namespace bapsolve
