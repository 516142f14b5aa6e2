#include <doctest.h>

#include <random>
#include <sstream>

#include "bapsolve/factory.hpp"
#include "bapsolve/hlwb.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace bapsolve;
using fixture::sparse;
using fixture::vec;

TEST_CASE("project_hyperplane") {
  CHECK(project_hyperplane(vec({0, 0}), vec({1, 1}), 1.0) == vec({0.5, 0.5}));
  CHECK(project_hyperplane(vec({0.25, 0.75}), vec({1, 1}), 1.0) == vec({0.25, 0.75}));
  CHECK_THROWS_AS(project_hyperplane(vec({0, 0}), vec({0, 0}), 1.0), InvalidArgument);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 200; ++k) {
    const Vector a = oracle::random_dense(6, 1, rng).col(0);
    const Vector x = oracle::random_dense(6, 1, rng).col(0);
    const double beta = nd(rng);
    const Vector p = project_hyperplane(x, a, beta);
    CHECK(std::abs(a.dot(p) - beta) <= 1e-14 * (1.0 + a.norm() * p.norm()));
    CHECK((p - x).norm() == doctest::Approx(std::abs(a.dot(x) - beta) / a.norm()).epsilon(1e-12));
  }
}

TEST_CASE("project_halfspace") {
  CHECK(project_halfspace(vec({1, 1}), vec({1, 0}), 0.0) == vec({0, 1}));
  CHECK(project_halfspace(vec({-1, 1}), vec({1, 0}), 0.0) == vec({-1, 1}));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 200; ++k) {
    const Vector a = oracle::random_dense(5, 1, rng).col(0);
    const Vector x = oracle::random_dense(5, 1, rng).col(0);
    const double beta = nd(rng);
    CHECK(a.dot(project_halfspace(x, a, beta)) <= beta + 1e-14 * (1.0 + a.norm() * x.norm()));
  }
}

TEST_CASE("steering sequences") {
  const SteeringSequence h = SteeringSequence::harmonic();
  CHECK(h(0) == 1.0);
  CHECK(h(3) == 0.25);
  CHECK_THROWS_AS(SteeringSequence::custom({0.0, 0.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(SteeringSequence::custom({0.5, 0.6}), InvalidArgument);
  CHECK_THROWS_AS(SteeringSequence::custom({1.5, 0.5}), InvalidArgument);
  CHECK_THROWS_AS(SteeringSequence::custom({0.1, 0.05}), InvalidArgument);
  const SteeringSequence c = SteeringSequence::custom({1.0, 0.9, 0.8});
  CHECK(c(1) == 0.9);
  CHECK(c(10) == doctest::Approx(1.0 / 11.0));
  CHECK(c(3) == 0.25);
}

TEST_CASE("feasible anchor stops after few sweeps") {
  const BapProblem p(sparse(1, 2, {1, 1}), vec({1}), vec({0.3, 0.7}));
  const HlwbResult r = solve_hlwb(p);
  CHECK(r.converged());
  CHECK(r.sweeps <= 2);
  CHECK(r.rel_residual <= 1e-3);
}

TEST_CASE("simplex example plateaus near 1e-4") {
  const BapProblem p = fixture::simplex_bap();
  HlwbConfig c;
  c.tol = 1e-16;
  c.max_sweeps = 2000;
  const HlwbResult r = solve_hlwb(p, c);
  CHECK(r.status == SolveStatus::max_iter);
  CHECK(r.sweeps == 2000);
  CHECK(r.steps == 2000 * 2);
  CHECK(r.rel_residual <= 1e-3);
  CHECK(r.rel_residual >= 1e-6);
  CHECK(r.x[0] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("sweep accounting and trace") {
  const GenSpec spec{10, 60, 0.3, 3, 0.1, Degeneracy::nondegenerate};
  const GeneratedBap g = gen_bap_with_known_vertex(spec);
  std::ostringstream trace;
  HlwbConfig c;
  c.tol = 1e-16;
  c.max_sweeps = 5;
  c.trace = &trace;
  const HlwbResult r = solve_hlwb(g.problem, c);
  CHECK(r.sweeps == 5);
  CHECK(r.steps == 5 * (10 + 1));
  CHECK(r.x.minCoeff() >= 0.0);
  std::istringstream lines(trace.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "sweep,rel_residual,sigma");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("harmonic steering reaches 1e-3 on random feasible problems") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GenSpec spec{10 + static_cast<int>(seed) * 4, 200, 0.1, seed, 0.1, Degeneracy::nondegenerate};
    const GeneratedBap g = gen_bap_with_known_vertex(spec);
    HlwbConfig c;
    c.tol = 1e-16;
    const HlwbResult r = solve_hlwb(g.problem, c);
    CHECK(r.rel_residual <= 1e-3);
    CHECK(r.x.minCoeff() >= 0.0);
  }
}

TEST_CASE("free variables are rejected") {
  const BapProblem f(sparse(1, 2, {1, 1}), vec({0}), vec({1, 1}), {Sign::nonnegative, Sign::free});
  CHECK_THROWS_AS(solve_hlwb(f), InvalidArgument);
}
