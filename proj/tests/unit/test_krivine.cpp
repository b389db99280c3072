#include "fpcert/krivine.hpp"
#include "fpcert/rounding.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace fpcert;

namespace {

std::vector<Polynomial> overview_s() {
  return analyze(parse_program("vars x in [0,1]; x*x - x"), RoundingConfig::for_precision(Precision::Binary64)).s;
}

// l'(u, e) for e in the joint layout.
Rational linear_part_at(const std::vector<Polynomial>& s, const std::vector<Rational>& u, const std::vector<Rational>& e) {
  Rational acc = 0;
  for (std::size_t j = 0; j < s.size(); ++j) acc += s[j].evaluate(u) * e[j];
  return acc;
}

}  // namespace

TEST_CASE("sparsity pattern") {
  const auto sp = SparsityPattern::for_error_problem(2, 3);
  CHECK(sp.blocks.size() == 3);
  CHECK(sp.blocks[1] == std::vector<std::size_t>{0, 1, 3});
  CHECK(sp.covers_all_variables());
  CHECK(sp.running_intersection());
}

TEST_CASE("Handelman products") {
  const auto order1 = gen_handelman_products(1, 1);
  REQUIRE(order1.size() == 5);
  const Polynomial x = Polynomial::variable(2, 0), e = Polynomial::variable(2, 1);
  const Polynomial one = Polynomial::constant(2, 1), half = Polynomial::constant(2, Rational(1, 2));
  std::vector<Polynomial> polys;
  for (const auto& p : order1) polys.push_back(p.poly);
  for (const auto& want : {one, x, one - x, half + half * e, half - half * e})
    CHECK(std::find(polys.begin(), polys.end(), want) != polys.end());

  for (unsigned k = 0; k <= 4; ++k)
    for (std::size_t n = 1; n <= 3; ++n)
      CHECK(Integer(static_cast<unsigned long>(gen_handelman_products(n, k).size())) == binomial(2 * (n + 1) + k, k));

  // x (1-x)^2 (1/2 + e/2)^2 (1/2 - e/2)^3.
  const auto order8 = gen_handelman_products(1, 8);
  HandelmanIndex idx{{1}, {2}, 2, 3};
  auto it = std::find_if(order8.begin(), order8.end(), [&](const HandelmanProduct& h) { return h.index == idx; });
  REQUIRE(it != order8.end());
  const Polynomial pe = half + half * e, me = half - half * e;
  CHECK(it->poly == x * (one - x).pow(2) * pe.pow(2) * me.pow(3));

  oracle::Rng rng(61);
  const auto order3 = gen_handelman_products(2, 3);
  for (const auto& h : order3) {
    for (int k = 0; k < 10; ++k) {
      const std::vector<Rational> pt = {oracle::random_in(rng, 0, 1), oracle::random_in(rng, 0, 1), oracle::random_in(rng, -1, 1)};
      CHECK(h.poly.evaluate(pt) == evaluate_product(h.index, pt));
    }
  }
}

TEST_CASE("overview relaxation sizes and names") {
  const auto lp = build_lp(overview_s(), 1, 3, Direction::Lower);
  CHECK(lp.column_count() == 106);
  CHECK(lp.row_count() == 22);
  const auto nominal = nominal_size(1, 3, 3);
  CHECK(nominal.columns == 106);
  CHECK(nominal.rows == 22);
  const auto dense = dense_size(1, 3, 3);
  CHECK(dense.columns == 166);
  CHECK(dense.rows == 35);
  CHECK(lp.column_name(lp.column_count() - 1) == "t");
  CHECK(lp.column_name(0).rfind("l_1_", 0) == 0);
  CHECK_THROWS_AS(build_lp(overview_s(), 1, 2, Direction::Lower), std::invalid_argument);
}

TEST_CASE("kepler2-scale column count") {
  CHECK(nominal_size(6, 42, 4).columns == 128521);
}

TEST_CASE("order zero with one block") {
  const std::vector<Polynomial> s = {Polynomial(1)};
  const auto lp = build_lp(s, 1, 0, Direction::Lower);
  CHECK(lp.column_count() == 2);
  CHECK(lp.row_count() == 1);
}

TEST_CASE("overview bound is exactly 2 with a zero residual") {
  KrivineOptions opts;
  opts.mode = LPMode::Exact;
  const auto r = krivine_bound(overview_s(), 1, opts);
  CHECK(r.bound == 2);
  CHECK(r.order == 3);
  CHECK(r.exact);
  CHECK(r.lower.raw_objective == -2);
  CHECK(r.upper.raw_objective == 2);
  CHECK(r.lower.certificate.certified == -2);
  CHECK(r.lower.certificate.residual_width() == 0);
  CHECK(r.upper.certificate.residual_width() == 0);

  opts.mode = LPMode::Float;
  const auto f = krivine_bound(overview_s(), 1, opts);
  CHECK(f.bound >= 2);
  CHECK(f.bound - 2 < Rational(1, 1000000));
}

TEST_CASE("constant-free and trivial targets") {
  const std::vector<Polynomial> zero(2, Polynomial(1));
  CHECK(krivine_bound(zero, 1).bound == 0);
  // l' = 3 e_1: bound 3 with no residual.
  const std::vector<Polynomial> three = {Polynomial::constant(1, 3)};
  KrivineOptions opts;
  opts.mode = LPMode::Exact;
  const auto r = krivine_bound(three, 1, opts);
  CHECK(r.bound == 3);
  CHECK(r.lower.certificate.residual_width() == 0);
}

TEST_CASE("certification is sound for arbitrary weights") {
  const auto lp = build_lp(overview_s(), 1, 3, Direction::Lower);
  oracle::Rng rng(62);
  std::uniform_int_distribution<int> w(-3, 5);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Rational> lambda(lp.columns.size());
    for (auto& v : lambda) v = Rational(w(rng), 16);
    const Rational t = Rational(w(rng), 3);
    const auto cert = certify(lp, t, lambda);
    // The certified lower bound is below l' everywhere.
    const auto s = overview_s();
    for (int k = 0; k < 200; ++k) {
      const std::vector<Rational> u = {oracle::random_in(rng, 0, 1)};
      const std::vector<Rational> e = {oracle::random_in(rng, -1, 1), oracle::random_in(rng, -1, 1), oracle::random_in(rng, -1, 1)};
      CHECK(cert.certified <= linear_part_at(s, u, e));
    }
  }
}

TEST_CASE("block certificates sum to the certificate polynomial") {
  const auto s = overview_s();
  const auto lp = build_lp(s, 1, 3, Direction::Lower);
  KrivineOptions opts;
  opts.mode = LPMode::Exact;
  const RationalLP full = lp.to_standard_form();
  const auto sol = simplex_exact(full);
  REQUIRE(sol.status == LPStatus::Optimal);
  std::vector<Rational> lambda(sol.x.begin(), sol.x.end() - 1);
  const auto blocks = block_certificates(lp, lambda);
  REQUIRE(blocks.size() == 3);
  Polynomial total(4);
  for (const auto& b : blocks) total += b;
  // Lower direction: sum lambda h = l' - t.
  CHECK(total == lp.target - Polynomial::constant(4, sol.x.back()));
  // Block j touches only x and e_j.
  for (std::size_t j = 0; j < 3; ++j)
    for (const auto& [mono, c] : blocks[j].terms())
      for (std::size_t other = 0; other < 3; ++other)
        if (other != j) CHECK(mono[1 + other] == 0);
}

TEST_CASE("random instances: soundness, grid oracle, monotonicity") {
  oracle::Rng rng(63);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 1 + trial % 2, m = 1 + trial % 3;
    const auto s = oracle::random_linear_coefficients(rng, n, m, 2);
    const auto r = krivine_bound(s, n);
    const auto r1 = krivine_bound(s, n, KrivineOptions{.order_increment = 1});
    CHECK(r.bound >= oracle::grid_max(s, n, 21));
    CHECK(r1.bound <= r.bound);
    for (int k = 0; k < 100; ++k) {
      std::vector<Rational> u, e;
      for (std::size_t i = 0; i < n; ++i) u.push_back(oracle::random_in(rng, 0, 1));
      for (std::size_t j = 0; j < m; ++j) e.push_back(oracle::random_in(rng, -1, 1));
      CHECK(abs(linear_part_at(s, u, e)) <= r.bound);
    }
    CHECK(Integer(static_cast<unsigned long>(r.columns)) == nominal_size(n, m, r.order).columns);
    CHECK(Integer(static_cast<unsigned long>(r.rows)) == nominal_size(n, m, r.order).rows);
  }
}

TEST_CASE("float mode with perturbed weights stays sound") {
  oracle::Rng rng(64);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 1 + trial % 2, m = 2;
    const auto s = oracle::random_linear_coefficients(rng, n, m, 2);
    KrivineOptions opts;
    opts.mode = LPMode::Float;
    opts.lambda_noise = 1e-7;
    opts.noise_seed = static_cast<unsigned>(trial + 1);
    const auto r = krivine_bound(s, n, opts);
    CHECK_FALSE(r.exact);
    CHECK(r.bound >= oracle::grid_max(s, n, 21));
  }
}
