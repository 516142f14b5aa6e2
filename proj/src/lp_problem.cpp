#include "bapsolve/lp_problem.hpp"

#include <cmath>

namespace bapsolve {

void LpProblem::validate() const {
  if (b.size() != a.rows()) throw InvalidArgument("b length must equal rows of A");
  if (c.size() != a.cols()) throw InvalidArgument("c length must equal columns of A");
  require_finite(b, "b");
  require_finite(c, "c");
  for (int j = 0; j < a.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      if (!std::isfinite(it.value())) throw InvalidArgument("A has non-finite entries");
    }
  }
}

}  // namespace bapsolve
