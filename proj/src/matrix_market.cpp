#include "bapsolve/matrix_market.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bapsolve {

std::string format_shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_sci(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.5e", x);
  return buf;
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty matrix market input", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix") {
      throw ParseError("missing %%MatrixMarket matrix banner", lineno);
    }
    if (format != "coordinate") throw ParseError("only coordinate format is supported", lineno);
    if (field != "real" && field != "integer") {
      throw ParseError("only real or integer fields are supported", lineno);
    }
    if (symmetry != "general") throw ParseError("only general symmetry is supported", lineno);
  }
  long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw ParseError("bad size line", lineno);
    }
    break;
  }
  if (rows < 0) throw ParseError("missing size line", lineno);
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  while (static_cast<long>(entries.size()) < nnz && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    long i, j;
    std::string tok;
    if (!(ss >> i >> j >> tok)) throw ParseError("bad entry", lineno);
    double val;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), val);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw ParseError("bad value '" + tok + "'", lineno);
    }
    if (i < 1 || i > rows || j < 1 || j > cols) throw ParseError("index out of range", lineno);
    if (!std::isfinite(val)) throw ParseError("non-finite value", lineno);
    entries.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), val);
  }
  if (static_cast<long>(entries.size()) != nnz) {
    throw ParseError("expected " + std::to_string(nnz) + " entries, got " +
                         std::to_string(entries.size()),
                     lineno);
  }
  SparseMatrix a(static_cast<int>(rows), static_cast<int>(cols));
  a.setFromTriplets(entries.begin(), entries.end());
  a.prune(0.0, 0.0);
  a.makeCompressed();
  return a;
}

SparseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  for (int j = 0; j < a.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      out << it.row() + 1 << ' ' << j + 1 << ' ' << format_shortest(it.value()) << '\n';
    }
  }
}

void write_matrix_market_file(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  write_matrix_market(out, a);
}

}  // namespace bapsolve
