#include "bapsolve/bap_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "bapsolve/matrix_market.hpp"

namespace bapsolve {

const Vector& Sidecar::vector(const std::string& name) const {
  auto it = vectors.find(name);
  if (it == vectors.end()) throw ParseError("sidecar has no vector '" + name + "'");
  return it->second;
}

std::string Sidecar::value(const std::string& key) const {
  auto it = header.find(key);
  if (it == header.end()) throw ParseError("sidecar has no key '" + key + "'");
  return it->second;
}

namespace {

struct TokenReader {
  std::istream& in;
  int line = 0;
  std::istringstream cur;

  bool next(std::string& tok) {
    while (!(cur >> tok)) {
      std::string l;
      if (!std::getline(in, l)) return false;
      ++line;
      auto hash = l.find('#');
      if (hash != std::string::npos) l.resize(hash);
      cur.clear();
      cur.str(l);
    }
    return true;
  }

  std::string expect() {
    std::string tok;
    if (!next(tok)) throw ParseError("unexpected end of sidecar", line);
    return tok;
  }

  long expect_count() {
    const std::string tok = expect();
    long n = -1;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), n);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size() || n < 0) {
      throw ParseError("bad count '" + tok + "'", line);
    }
    return n;
  }

  double expect_double() {
    const std::string tok = expect();
    double x = 0.0;
    auto r = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (r.ec != std::errc() || r.ptr != tok.data() + tok.size() || !std::isfinite(x)) {
      throw ParseError("bad number '" + tok + "'", line);
    }
    return x;
  }
};

}  // namespace

Sidecar read_sidecar(std::istream& in) {
  Sidecar s;
  TokenReader r{in, 0, {}};
  std::string tok;
  bool ended = false;
  while (r.next(tok)) {
    if (tok == "end") {
      ended = true;
      break;
    }
    if (tok == "vector") {
      const std::string name = r.expect();
      const long len = r.expect_count();
      Vector v(len);
      for (long i = 0; i < len; ++i) v[i] = r.expect_double();
      if (!s.vectors.emplace(name, std::move(v)).second) {
        throw ParseError("duplicate vector '" + name + "'", r.line);
      }
    } else if (tok == "signs") {
      const long len = r.expect_count();
      s.signs.resize(static_cast<std::size_t>(len));
      for (long i = 0; i < len; ++i) {
        const std::string c = r.expect();
        if (c == "n") {
          s.signs[static_cast<std::size_t>(i)] = Sign::nonnegative;
        } else if (c == "f") {
          s.signs[static_cast<std::size_t>(i)] = Sign::free;
        } else {
          throw ParseError("bad sign token '" + c + "'", r.line);
        }
      }
    } else {
      // header lines are "key value" on one line
      std::string rest;
      std::getline(r.cur, rest);
      const auto first = rest.find_first_not_of(" \t");
      s.header[tok] = first == std::string::npos ? "" : rest.substr(first);
      r.cur.clear();
      r.cur.str("");
    }
  }
  if (!ended) throw ParseError("sidecar is missing 'end'", r.line);
  return s;
}

Sidecar read_sidecar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_sidecar(in);
}

void write_sidecar(std::ostream& out, const Sidecar& s) {
  for (const auto& [k, v] : s.header) out << k << ' ' << v << '\n';
  for (const auto& [name, v] : s.vectors) {
    out << "vector " << name << ' ' << v.size() << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      out << format_shortest(v[i]) << ((i + 1) % 8 == 0 || i + 1 == v.size() ? '\n' : ' ');
    }
  }
  if (!s.signs.empty()) {
    out << "signs " << s.signs.size() << '\n';
    for (std::size_t i = 0; i < s.signs.size(); ++i) {
      out << (s.signs[i] == Sign::free ? 'f' : 'n')
          << ((i + 1) % 40 == 0 || i + 1 == s.signs.size() ? '\n' : ' ');
    }
  }
  out << "end\n";
}

void write_sidecar_file(const std::string& path, const Sidecar& s) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path);
  write_sidecar(out, s);
}

void save_bap(const std::string& stem, const BapProblem& p) {
  write_matrix_market_file(stem + ".mtx", p.a());
  Sidecar s;
  s.header["kind"] = "bap";
  s.header["m"] = std::to_string(p.m());
  s.header["n"] = std::to_string(p.n());
  s.vectors["b"] = p.b();
  s.vectors["v"] = p.v();
  if (p.has_free()) s.signs = p.signs();
  write_sidecar_file(stem + ".vec", s);
}

BapProblem load_bap(const std::string& matrix_path, const std::string& sidecar_path) {
  SparseMatrix a = read_matrix_market_file(matrix_path);
  Sidecar s = read_sidecar_file(sidecar_path);
  if (s.header.count("kind") && s.value("kind") != "bap") {
    throw ParseError(sidecar_path + " is not a bap sidecar");
  }
  return BapProblem(std::move(a), s.vector("b"), s.vector("v"), s.signs);
}

void save_lp(const std::string& stem, const LpProblem& lp, const Sidecar& extra) {
  write_matrix_market_file(stem + ".mtx", lp.a);
  Sidecar s = extra;
  s.header["kind"] = "lp";
  s.header["m"] = std::to_string(lp.m());
  s.header["n"] = std::to_string(lp.n());
  s.vectors["b"] = lp.b;
  s.vectors["c"] = lp.c;
  write_sidecar_file(stem + ".vec", s);
}

LpProblem load_lp(const std::string& matrix_path, const std::string& sidecar_path) {
  Sidecar s = read_sidecar_file(sidecar_path);
  if (s.header.count("kind") && s.value("kind") != "lp") {
    throw ParseError(sidecar_path + " is not an lp sidecar");
  }
  LpProblem lp{read_matrix_market_file(matrix_path), s.vector("b"), s.vector("c")};
  lp.validate();
  return lp;
}

void write_bap_solution(std::ostream& out, const BapProblem& p, const BapSolution& sol) {
  Sidecar s;
  s.header["kind"] = "bap-solution";
  s.vectors["x"] = sol.x;
  s.vectors["y"] = sol.y;
  s.vectors["z"] = sol.z;
  write_sidecar(out, s);
  const KktReport k = kkt_report(p, sol);
  out << "status " << to_string(sol.status) << " iterations " << sol.iterations << " primal "
      << format_sci(k.primal_feas) << " dual " << format_sci(k.dual_feas) << " comp "
      << format_sci(k.comp_slack) << '\n';
}

}  // namespace bapsolve
