#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "bapsolve/bap_io.hpp"
#include "bapsolve/factory.hpp"
#include "bapsolve/lp_ssepf.hpp"
#include "bapsolve/mps.hpp"

using namespace bapsolve;

namespace {

std::string data(const std::string& name) { return std::string(BAPSOLVE_TEST_DATA) + "/" + name; }

MpsModel parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_mps(in);
}

// Feasible original points: mapped-back vertices for random objectives, then
// random convex combinations of them.
std::vector<Vector> feasible_points(const StandardForm& sf, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Vector> vertices;
  for (int k = 0; k < 8; ++k) {
    LpProblem lp = sf.lp;
    for (int j = 0; j < lp.c.size(); ++j) lp.c[j] = nd(rng);
    const LpOracleResult r = reference_simplex(lp);
    if (r.status == LpStatus::optimal) vertices.push_back(sf.original_x(r.x));
  }
  REQUIRE(!vertices.empty());
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> out;
  for (int k = 0; k < count; ++k) {
    Vector w(static_cast<Eigen::Index>(vertices.size()));
    for (auto& x : w) x = u(rng);
    w /= w.sum();
    Vector p = Vector::Zero(vertices[0].size());
    for (std::size_t i = 0; i < vertices.size(); ++i) p += w[static_cast<Eigen::Index>(i)] * vertices[i];
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("tiny fixture parses with matching coefficients") {
  const MpsModel m = parse_mps_file(data("tiny.mps"));
  CHECK(m.name == "TINY");
  CHECK(m.maximize);
  CHECK(m.num_rows() == 1);
  CHECK(m.num_cols() == 2);
  CHECK(m.rows[0].type == 'L');
  CHECK(m.cost[0] == 1.0);
  CHECK(m.cost[1] == 0.0);
  CHECK(m.rhs[0] == 1.0);
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[1].col == 1);
  CHECK(m.entries[1].value == 1.0);
}

TEST_CASE("single inequality gets one slack") {
  const StandardForm sf = to_standard_form(parse_mps_file(data("tiny.mps")));
  CHECK(DenseMatrix(sf.lp.a) == DenseMatrix::Ones(1, 3));
  CHECK(sf.lp.b[0] == 1.0);
  CHECK(sf.lp.c[0] == 1.0);
  CHECK(sf.sense == 1.0);
}

TEST_CASE("truncated file names the missing ENDATA") {
  try {
    parse_mps_file(data("truncated.mps"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("ENDATA") != std::string::npos);
  }
}

TEST_CASE("malformed input is rejected with line numbers") {
  SUBCASE("section order") {
    CHECK_THROWS_AS(parse_text("NAME X\nCOLUMNS\nROWS\n N OBJ\nENDATA\n"), ParseError);
  }
  SUBCASE("duplicate rows") {
    try {
      parse_text("NAME X\nROWS\n N OBJ\n L R1\n L R1\nCOLUMNS\nENDATA\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SUBCASE("integer markers") {
    CHECK_THROWS_AS(parse_text("NAME X\nROWS\n N OBJ\n L R1\nCOLUMNS\n"
                               "    M1 'MARKER' 'INTORG'\n    X1 OBJ 1 R1 1\nENDATA\n"),
                    ParseError);
  }
  SUBCASE("binary bound") {
    CHECK_THROWS_AS(parse_text("NAME X\nROWS\n N OBJ\n L R1\nCOLUMNS\n    X1 OBJ 1 R1 1\n"
                               "RHS\n    RHS R1 1\nBOUNDS\n BV BND X1\nENDATA\n"),
                    ParseError);
  }
  SUBCASE("unknown row") {
    CHECK_THROWS_AS(parse_text("NAME X\nROWS\n N OBJ\nCOLUMNS\n    X1 NOPE 1\nENDATA\n"), ParseError);
  }
}

TEST_CASE("free variable splits into opposite columns") {
  const MpsModel m = parse_text(
      "NAME F\nROWS\n N OBJ\n E R1\nCOLUMNS\n    X1 OBJ 1 R1 1\n    X2 R1 1\n"
      "RHS\n    RHS R1 2\nBOUNDS\n FR BND X1\nENDATA\n");
  const StandardForm sf = to_standard_form(m);
  REQUIRE(sf.lp.n() == 3);
  const DenseMatrix a(sf.lp.a);
  CHECK(a(0, 0) == -a(0, 1));
  CHECK(sf.lp.c[0] == -sf.lp.c[1]);
  CHECK(sf.original_x(Vector::Unit(3, 1))[0] == -1.0);
}

TEST_CASE("fixed-column format is accepted") {
  // fields start at columns 2, 5, 15, 25, 40, 50 (1-based)
  auto line = [](std::initializer_list<std::pair<int, const char*>> fields) {
    std::string s;
    for (const auto& [col, text] : fields) {
      s.resize(static_cast<std::size_t>(col - 1), ' ');
      s += text;
    }
    return s + "\n";
  };
  const std::string text = "NAME          FIXED\nROWS\n" + line({{2, "N"}, {5, "COST"}}) +
                           line({{2, "L"}, {5, "LIM 1"}}) + "COLUMNS\n" +
                           line({{5, "X ONE"}, {15, "COST"}, {25, "1.0"}, {40, "LIM 1"}, {50, "1.0"}}) +
                           "RHS\n" + line({{5, "RHS"}, {15, "LIM 1"}, {25, "2.0"}}) + "ENDATA\n";
  const MpsModel m = parse_text(text);
  CHECK(m.rows[0].name == "LIM 1");
  CHECK(m.columns[0] == "X ONE");
  CHECK(m.rhs[0] == 2.0);
}

TEST_CASE("mixed fixture: bounds, ranges and the known optimum") {
  const MpsModel m = parse_mps_file(data("mixed.mps"));
  CHECK(m.objective_constant == 3.0);
  double lo, hi;
  m.row_bounds(3, lo, hi);
  CHECK(lo == 1.0);
  CHECK(hi == 3.0);
  m.row_bounds(4, lo, hi);
  CHECK(lo == -1.0);
  CHECK(hi == 2.0);
  const StandardForm sf = to_standard_form(m);
  const LpSolveResult r = solve_lp(sf.lp);
  REQUIRE(r.status == LpSolveStatus::optimal);
  const Vector x = sf.original_x(r.cert.x);
  // optimum computed once with an external LP code and frozen here
  CHECK(sf.original_objective(r.objective()) == doctest::Approx(1.75).epsilon(1e-9));
  CHECK(m.objective(x) == doctest::Approx(1.75).epsilon(1e-9));
  CHECK(m.max_violation(x) <= 1e-9);
  const LpOracleResult s = reference_simplex(sf.lp);
  CHECK(sf.original_objective(s.value) == doctest::Approx(1.75).epsilon(1e-12));
}

TEST_CASE("standard form preserves feasibility and objective") {
  for (const char* file : {"mixed.mps", "afiro.mps"}) {
    CAPTURE(file);
    const MpsModel m = parse_mps_file(data(file));
    const StandardForm sf = to_standard_form(m);
    for (const Vector& x : feasible_points(sf, 100, 5)) {
      REQUIRE(m.max_violation(x) <= 1e-9);
      const Vector xs = sf.standard_x(x);
      CHECK((sf.lp.a * xs - sf.lp.b).norm() <= 1e-12 * (1.0 + sf.lp.b.norm() + x.norm()));
      CHECK(xs.minCoeff() >= -1e-12);
      CHECK((sf.original_x(xs) - x).norm() <= 1e-12 * (1.0 + x.norm()));
      const double std_obj = sf.lp.c.dot(xs);
      CHECK(sf.original_objective(std_obj) == doctest::Approx(m.objective(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("afiro parses, converts and solves") {
  const MpsModel m = parse_mps_file(data("afiro.mps"));
  CHECK(m.num_rows() == 27);
  CHECK(m.num_cols() == 32);
  const StandardForm sf = to_standard_form(m);
  const LpSolveResult r = solve_lp(sf.lp);
  CHECK(r.status == LpSolveStatus::optimal);
  CHECK(r.cert.gap() <= 1e-8);
  const LpOracleResult s = reference_simplex(sf.lp);
  REQUIRE(s.status == LpStatus::optimal);
  const double ours = sf.original_objective(r.objective());
  const double ref = sf.original_objective(s.value);
  CHECK(std::abs(ours - ref) <= 1e-6 * std::abs(ref));
  CHECK(ref == doctest::Approx(-464.753).epsilon(1e-6));
}

TEST_CASE("sidecar format") {
  Sidecar s;
  s.header["kind"] = "bap";
  s.vectors["b"] = Vector::LinSpaced(3, 0.1, 0.3);
  s.signs = {Sign::nonnegative, Sign::free};
  std::stringstream ss;
  write_sidecar(ss, s);
  const Sidecar t = read_sidecar(ss);
  CHECK(t.value("kind") == "bap");
  CHECK(t.vector("b") == s.vectors["b"]);
  CHECK(t.signs == s.signs);
  std::istringstream bad("vector b 3\n1 2\nend\n");
  CHECK_THROWS_AS(read_sidecar(bad), ParseError);
  std::istringstream nan("vector b 1\nnan\nend\n");
  CHECK_THROWS_AS(read_sidecar(nan), ParseError);
}

TEST_CASE("lp instance round trip") {
  GenSpec spec;
  spec.m = 3;
  spec.n = 8;
  spec.density = 0.6;
  const GeneratedLp g = gen_lp(spec);
  save_lp("lp_roundtrip_tmp", g.problem);
  const LpProblem back = load_lp("lp_roundtrip_tmp.mtx", "lp_roundtrip_tmp.vec");
  CHECK(DenseMatrix(back.a) == DenseMatrix(g.problem.a));
  CHECK(back.b == g.problem.b);
  CHECK(back.c == g.problem.c);
  CHECK_THROWS_AS(load_bap("lp_roundtrip_tmp.mtx", "lp_roundtrip_tmp.vec"), ParseError);
  std::remove("lp_roundtrip_tmp.mtx");
  std::remove("lp_roundtrip_tmp.vec");
}
