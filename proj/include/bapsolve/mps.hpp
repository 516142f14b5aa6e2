#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bapsolve/lp_problem.hpp"

namespace bapsolve {

struct MpsRow {
  std::string name;
  char type = 'E';  // E, L or G
};

struct MpsEntry {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Parsed MPS model. Constraint rows exclude every N row; `cost` holds the
/// coefficients of the first N row.
struct MpsModel {
  std::string name;
  bool maximize = false;
  std::string objective_name;
  std::vector<MpsRow> rows;
  std::vector<std::string> columns;
  std::vector<MpsEntry> entries;
  Vector cost;
  double objective_constant = 0.0;  // minus the RHS given on the objective row
  Vector rhs;
  Vector range;                     // NaN where the row has no range
  Vector lower;
  Vector upper;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(columns.size()); }

  /// Row activity bounds after applying RANGES.
  void row_bounds(int i, double& lo, double& hi) const;
  double objective(const Vector& x) const;
  /// Largest violation of row and column bounds at x.
  double max_violation(const Vector& x) const;
};

/// Accepts fixed and free format. Throws ParseError with the line number for
/// malformed sections, duplicate rows, unknown names, integer markers and
/// unsupported bound types; a missing ENDATA is an error.
MpsModel parse_mps(std::istream& in);
MpsModel parse_mps_file(const std::string& path);

/// Equality form max c^T x, Ax = b, x >= 0 together with the affine map
/// x_orig = shift + map * x_std.
struct StandardForm {
  LpProblem lp;
  SparseMatrix map;
  Vector shift;
  double sense = -1.0;  // +1 for maximization models
  double offset = 0.0;

  Vector original_x(const Vector& x_std) const;
  /// Objective of the original model at original_x(x_std).
  double original_objective(double std_objective) const { return offset + sense * std_objective; }

  /// Standard-form point of an original point: variable pieces from the
  /// bounds, slacks from the row activities. Inverse of original_x on the
  /// feasible set.
  Vector standard_x(const Vector& x_orig) const;

  // How each standard column is recovered from an original point.
  enum class Source : std::uint8_t { above_lower, below_upper, positive_part, negative_part,
                                     slack_upper, slack_lower, width };
  struct ColumnSource {
    Source kind;
    int index;      // original column, original row, or (width) an earlier column
    double value;   // bound, row bound, or width
  };
  std::vector<ColumnSource> sources;  // one per column before empty ones are dropped
  std::vector<int> kept;              // surviving column positions in `sources`
  SparseMatrix original_a;
};

StandardForm to_standard_form(const MpsModel& model);

}  // namespace bapsolve
