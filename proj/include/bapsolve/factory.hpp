#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bapsolve/bap.hpp"
#include "bapsolve/lp_problem.hpp"

namespace bapsolve {

enum class Degeneracy { nondegenerate, degenerate, non_vertex };
std::string to_string(Degeneracy d);
Degeneracy parse_degeneracy(const std::string& s);

struct GenSpec {
  int m = 10;
  int n = 50;
  double density = 0.1;  // fraction of nonzeros per column, in (0, 1]
  std::uint64_t seed = 1;
  double anchor_norm = 0.1;
  Degeneracy degeneracy = Degeneracy::nondegenerate;

  void validate() const;
};

/// Sparse m x n matrix with ~density*m entries per column, at least one entry
/// in every row and column, scaled to unit estimated spectral norm.
SparseMatrix random_constraint_matrix(int m, int n, double density, std::uint64_t seed);

struct GeneratedBap {
  BapProblem problem;
  Vector known_x;
  Vector y;  // multiplier certifying known_x
  Vector z;
  IndexSet support;  // positive coordinates of known_x
};

/// Builds v = x - s (A^T u + z) so that the constructed x is the projection of v.
GeneratedBap gen_bap_with_known_vertex(const GenSpec& spec);

struct GeneratedLp {
  LpProblem problem;
  double known_optimum = 0.0;
  Vector known_x;
  Vector y;  // dual certificate: c = A^T y - z
  IndexSet basis;
};

/// LP with a vertex optimum x* (||x*|| = 1) and c in the polar cone at x*.
/// Degenerate mode appends a copy of a basic column, so the optimum is not unique.
GeneratedLp gen_lp(const GenSpec& spec);

struct TriangleSpec {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;     // empty means complete graph
  std::vector<std::array<int, 3>> triples;    // empty means every triangle of the graph
};

/// Edge list text: first line "<num_vertices>", then "u v" per line (0-based).
TriangleSpec read_edge_list(std::istream& in);

struct TriangleBap {
  BapProblem problem;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::array<int, 3>> triples;
  int num_edges() const { return static_cast<int>(edges.size()); }
};

/// Variables (x, s, t) with Tx + s = 0 and x + t = e, all nonnegative, anchored
/// at (xbar, -T xbar, e - xbar). Three rows of T per triple.
TriangleBap build_triangle_bap(const TriangleSpec& spec, const Vector& xbar);

enum class LpStatus { optimal, infeasible, unbounded };
std::string to_string(LpStatus s);

struct LpOracleResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vector x;
};

/// Enumerates basic solutions. Throws InvalidArgument for n > 20.
LpOracleResult oracle_lp_vertex_enumeration(const LpProblem& lp);

/// Dense two-phase tableau simplex with Bland's rule.
LpOracleResult reference_simplex(const LpProblem& lp);

struct ManifestEntry {
  std::uint64_t seed = 0;
  std::string kind;
  std::string path;
};
void write_manifest(std::ostream& out, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(std::istream& in);

}  // namespace bapsolve
