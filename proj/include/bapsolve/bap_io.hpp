#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bapsolve/bap.hpp"
#include "bapsolve/lp_problem.hpp"

namespace bapsolve {

/// Plain text sidecar: "key value" header lines, then blocks of the form
/// "vector <name> <len>" or "signs <len>" followed by whitespace separated
/// values, closed by "end". Sign tokens are "n" (nonnegative) and "f" (free).
struct Sidecar {
  std::map<std::string, std::string> header;
  std::map<std::string, Vector> vectors;
  std::vector<Sign> signs;

  const Vector& vector(const std::string& name) const;
  std::string value(const std::string& key) const;
};

Sidecar read_sidecar(std::istream& in);
Sidecar read_sidecar_file(const std::string& path);
void write_sidecar(std::ostream& out, const Sidecar& s);
void write_sidecar_file(const std::string& path, const Sidecar& s);

/// `<stem>.mtx` plus `<stem>.vec`.
void save_bap(const std::string& stem, const BapProblem& p);
BapProblem load_bap(const std::string& matrix_path, const std::string& sidecar_path);

/// LP instance with vectors b and c. `extra` vectors and header keys are
/// written alongside (e.g. a known optimum).
void save_lp(const std::string& stem, const LpProblem& lp, const Sidecar& extra = {});
LpProblem load_lp(const std::string& matrix_path, const std::string& sidecar_path);

/// Vectors x, y, z followed by a summary line:
/// status <s> iterations <k> primal <r> dual <r> comp <r>
void write_bap_solution(std::ostream& out, const BapProblem& p, const BapSolution& sol);

}  // namespace bapsolve
