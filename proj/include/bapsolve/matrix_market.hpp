#pragma once

#include <iosfwd>
#include <string>

#include "bapsolve/types.hpp"

namespace bapsolve {

/// Reads a real general coordinate Matrix Market file. Entries are 1-based
/// in the file. Throws ParseError on malformed input.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market_file(const std::string& path);

/// Writes coordinate format with shortest round-trip decimal values.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);
void write_matrix_market_file(const std::string& path, const SparseMatrix& a);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_shortest(double x);

/// "%.5e" formatting used for human-facing numbers.
std::string format_sci(double x);

}  // namespace bapsolve
