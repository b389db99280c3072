#include "fpcert/krivine.hpp"
#include "fpcert/lpsolve.hpp"
#include "fpcert/rounding.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace fpcert;

namespace {

// max t s.t. t + s = 1, s >= 0, t free.
RationalLP trivial_lp() {
  RationalLP lp;
  lp.rows = 1;
  lp.b = {1};
  lp.add_column("t", {{0, Rational(1)}}, Rational(1), ColumnBound::Free);
  lp.add_column("s", {{0, Rational(1)}}, Rational(0));
  return lp;
}

RationalLP overview_lower() {
  const auto dec = analyze(parse_program("vars x in [0,1]; x*x - x"), RoundingConfig::for_precision(Precision::Binary64));
  return build_lp(dec.s, 1, 3, Direction::Lower).to_standard_form();
}

}  // namespace

TEST_CASE("trivial LP") {
  const auto lp = trivial_lp();
  const auto ex = simplex_exact(lp);
  REQUIRE(ex.status == LPStatus::Optimal);
  CHECK(ex.objective == 1);
  const auto fl = simplex_float(to_float(lp));
  REQUIRE(fl.status == LPStatus::Optimal);
  CHECK(std::abs(fl.objective - 1.0) <= 1e-9);
}

TEST_CASE("infeasible and unbounded instances") {
  RationalLP inf;
  inf.rows = 1;
  inf.b = {-1};
  inf.add_column("x", {{0, Rational(1)}}, Rational(1));
  CHECK(simplex_exact(inf).status == LPStatus::Infeasible);
  CHECK(simplex_float(to_float(inf)).status == LPStatus::Infeasible);

  RationalLP unb;
  unb.rows = 1;
  unb.b = {0};
  unb.add_column("x", {{0, Rational(1)}}, Rational(1));
  unb.add_column("y", {{0, Rational(-1)}}, Rational(0));
  CHECK(simplex_exact(unb).status == LPStatus::Unbounded);
  CHECK(simplex_float(to_float(unb)).status == LPStatus::Unbounded);
}

TEST_CASE("overview relaxation optimum") {
  const auto lp = overview_lower();
  const auto ex = simplex_exact(lp);
  REQUIRE(ex.status == LPStatus::Optimal);
  CHECK(ex.objective == -2);
  CHECK(exactly_feasible(lp, ex.x));
  const auto fl = simplex_float(to_float(lp));
  REQUIRE(fl.status == LPStatus::Optimal);
  CHECK(std::abs(fl.objective + 2) <= 1e-6);
}

TEST_CASE("small LPs match vertex enumeration") {
  oracle::Rng rng(51);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const std::size_t cols = std::uniform_int_distribution<std::size_t>(rows + 1, 12)(rng);
    const auto lp = oracle::random_lp(rng, rows, cols, 0.6);
    const auto brute = oracle::vertex_enumeration(lp);
    if (!brute) continue;  // rank-deficient draw
    const auto ex = simplex_exact(lp);
    REQUIRE(ex.status == LPStatus::Optimal);
    CHECK(ex.objective == *brute);
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("medium LPs are certified by strong duality") {
  oracle::Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    const auto lp = oracle::random_lp(rng, 20, 40, 0.4);
    const auto ex = simplex_exact(lp);
    REQUIRE(ex.status == LPStatus::Optimal);
    CHECK(exactly_feasible(lp, ex.x));
    CHECK(oracle::certifies_optimality(lp, ex.x, ex.duals));
    const auto bound = dual_objective_bound(lp, ex.duals);
    REQUIRE(bound);
    CHECK(*bound == ex.objective);
  }
}

TEST_CASE("float solver cross-check with duals") {
  oracle::Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const auto lp = oracle::random_lp(rng, 30, 120, 0.3);
    const auto ex = simplex_exact(lp);
    const auto fl = simplex_float(to_float(lp));
    REQUIRE(ex.status == LPStatus::Optimal);
    REQUIRE(fl.status == LPStatus::Optimal);
    CHECK(std::abs(fl.objective - to_double(ex.objective)) <= 1e-6 * std::max(1.0, std::abs(to_double(ex.objective))));
    CHECK(fl.infeasibility <= 1e-7);
    CHECK(primal_residual(to_float(lp), fl.x) <= 1e-7);
  }
}

TEST_CASE("exact column cap") {
  SolverOptions opts;
  opts.exact_column_cap = 1;
  CHECK_THROWS_AS(simplex_exact(trivial_lp(), opts), ExactCapExceeded);
}

TEST_CASE("iteration limit is reported") {
  oracle::Rng rng(54);
  const auto lp = oracle::random_lp(rng, 20, 60, 0.5);
  SolverOptions opts;
  opts.max_iterations = 1;
  const auto st = simplex_exact(lp, opts).status;
  CHECK((st == LPStatus::IterationLimit || st == LPStatus::Optimal));
}

TEST_CASE("presolve removes empty rows and duplicate columns") {
  RationalLP lp;
  lp.rows = 3;
  lp.b = {2, 0, 3};
  lp.add_column("a", {{0, Rational(1)}, {2, Rational(1)}}, Rational(1));
  lp.add_column("b", {{0, Rational(1)}, {2, Rational(1)}}, Rational(1));
  lp.add_column("c", {{2, Rational(1)}}, Rational(0));
  const Presolved pre = presolve(lp);
  CHECK(pre.removed_rows == 1);
  CHECK(pre.removed_columns == 1);
  CHECK(pre.lp.rows == 2);
  const auto sol = simplex_exact(pre.lp);
  REQUIRE(sol.status == LPStatus::Optimal);
  const auto x = pre.expand_primal(sol.x, lp.cols());
  CHECK(exactly_feasible(lp, x));
  CHECK(sol.objective == 2);

  RationalLP bad = lp;
  bad.b[1] = 1;
  CHECK(presolve(bad).infeasible);
}

TEST_CASE("validate rejects inconsistent dimensions") {
  RationalLP lp = trivial_lp();
  lp.b.push_back(0);
  CHECK_THROWS_AS(lp.validate(), std::invalid_argument);
}

TEST_CASE("LP text round trip") {
  const auto lp = overview_lower();
  std::ostringstream out;
  write_lp(out, lp);
  const std::string text = out.str();
  CHECK(text.find("Maximize") != std::string::npos);
  CHECK(text.find("t free") != std::string::npos);
  std::istringstream in(text);
  const auto back = read_lp(in);
  CHECK(back.rows == lp.rows);
  CHECK(back.columns == lp.columns);
  CHECK(back.b == lp.b);
  CHECK(back.c == lp.c);
  CHECK(back.bounds == lp.bounds);
  CHECK(back.column_names == lp.column_names);
  CHECK(simplex_exact(back).objective == -2);
}

TEST_CASE("LP text keeps non-terminating coefficients exact") {
  RationalLP lp;
  lp.rows = 1;
  lp.sense = Sense::Minimize;
  lp.b = {Rational(1, 3)};
  lp.add_column("x", {{0, Rational(2, 7)}}, Rational(-5, 3));
  std::ostringstream out;
  write_lp(out, lp);
  std::istringstream in(out.str());
  const auto back = read_lp(in);
  CHECK(back.columns == lp.columns);
  CHECK(back.b == lp.b);
  CHECK(back.c == lp.c);
  CHECK(back.sense == Sense::Minimize);
}

TEST_CASE("LP reader rejects malformed text") {
  std::istringstream in("Maximize\n obj: 2 x +\nSubject To\n");
  CHECK_THROWS_AS(read_lp(in), LPFormatError);
}
