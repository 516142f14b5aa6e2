#pragma once

#include <initializer_list>

#include "bapsolve/bap.hpp"
#include "bapsolve/lp_problem.hpp"

namespace fixture {

using namespace bapsolve;

inline SparseMatrix sparse(int rows, int cols, std::initializer_list<double> row_major) {
  DenseMatrix d(rows, cols);
  auto it = row_major.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) d(i, j) = *it++;
  }
  SparseMatrix s = d.sparseView();
  s.makeCompressed();
  return s;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

/// Projection of the origin onto the simplex {x1 + x2 = 1, x >= 0}.
inline BapProblem simplex_bap() { return BapProblem(sparse(1, 2, {1, 1}), vec({1}), vec({0, 0})); }

/// max x1 subject to x1 + x2 = 1, x >= 0.
inline LpProblem tiny_lp() { return LpProblem{sparse(1, 2, {1, 1}), vec({1}), vec({1, 0})}; }

}  // namespace fixture
