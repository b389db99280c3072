#include "fpcert/polynomial.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace fpcert;

namespace {

Polynomial x1() { return Polynomial::variable(1, 0); }

Polynomial random_poly(oracle::Rng& rng, std::size_t n, int terms, unsigned max_deg) {
  auto s = oracle::random_linear_coefficients(rng, n, 1, max_deg);
  Polynomial p = s[0];
  for (int t = 1; t < (terms + 3) / 4; ++t) p += oracle::random_linear_coefficients(rng, n, 1, max_deg)[0];
  return p;
}

std::vector<Rational> random_unit_point(oracle::Rng& rng, std::size_t n) {
  std::vector<Rational> u;
  for (std::size_t i = 0; i < n; ++i) u.push_back(oracle::random_in(rng, -2, 2));
  return u;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("0.954929658551372") * Rational(mpz_class("1000000000000000")) == Rational(mpz_class("954929658551372")));
  CHECK(parse_rational("-1/6") == Rational(-1, 6));
  CHECK(parse_rational("1.5e-3") == Rational(3, 2000));
  CHECK_THROWS_AS(parse_rational("1/0"), RationalFormatError);
  CHECK_THROWS_AS(parse_rational("abc"), RationalFormatError);
}

TEST_CASE("representability and decimal rendering") {
  CHECK(is_representable(Rational(5, 128), 53));
  CHECK_FALSE(is_representable(Rational(1, 10), 53));
  CHECK(is_representable(Rational(16777215), 24));
  CHECK_FALSE(is_representable(Rational(16777217), 24));
  CHECK(to_decimal_upper(Rational(1, 3), 3) == "3.34e-01");
  CHECK(parse_rational(to_decimal_upper(Rational(2, 7), 4)) >= Rational(2, 7));
  CHECK(to_exact_decimal(Rational(5, 128)) == "0.0390625");
}

TEST_CASE("ring operations") {
  const Polynomial x = x1();
  const Polynomial one = Polynomial::constant(1, 1);
  CHECK((x * x - x) + x == x * x);
  CHECK((one - x) * (one + x) == one - x * x);
  CHECK((x - x).is_zero());
}

TEST_CASE("multiplication agrees with pointwise evaluation") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_poly(rng, 3, 5, 3), q = random_poly(rng, 3, 5, 3);
    const Polynomial pq = p * q;
    for (int k = 0; k < 20; ++k) {
      const auto u = random_unit_point(rng, 3);
      CHECK(pq.evaluate(u) == p.evaluate(u) * q.evaluate(u));
    }
  }
}

TEST_CASE("ring axioms on random triples") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial a = random_poly(rng, 2, 4, 3), b = random_poly(rng, 2, 4, 3), c = random_poly(rng, 2, 4, 3);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
  }
}

TEST_CASE("degree bookkeeping and canonical text") {
  Polynomial p(2);
  p.add_term(Monomial({2, 1}), 3);
  p.add_term(Monomial({0, 2}), -1);
  p.add_term(Monomial({0, 0}), Rational(1, 2));
  CHECK(p.total_degree() == 3);
  CHECK(p.multidegree() == std::vector<unsigned>{2, 2});
  CHECK(p.to_string() == "3*x1^2*x2 - x2^2 + 1/2");
}

TEST_CASE("affine substitution") {
  const AffineMap to_box{-15, 30};
  const Polynomial q = affine_substitute(x1(), std::span(&to_box, 1));
  CHECK(q == Polynomial::constant(1, -15) + Polynomial::constant(1, 30) * x1());

  const Polynomial p = x1() * x1() - x1();
  const AffineMap identity{0, 1};
  CHECK(affine_substitute(p, std::span(&identity, 1)) == p);

  oracle::Rng rng(13);
  const AffineMap f{Rational(1, 3), 2}, g{-1, Rational(5, 4)};
  // p(f(g(u))) = p((1/3 + 2(-1 + 5u/4))).
  const AffineMap fg{f.offset + f.slope * g.offset, f.slope * g.slope};
  const Polynomial r = random_poly(rng, 1, 5, 4);
  const Polynomial composed = affine_substitute(affine_substitute(r, std::span(&f, 1)), std::span(&g, 1));
  CHECK(composed == affine_substitute(r, std::span(&fg, 1)));
}

TEST_CASE("rigidBody1 under its box maps agrees with evaluation") {
  Polynomial p(3);
  p.add_term(Monomial({1, 1, 0}), -1);
  p.add_term(Monomial({0, 1, 1}), -2);
  p.add_term(Monomial({1, 0, 0}), -1);
  p.add_term(Monomial({0, 0, 1}), -1);
  const std::vector<AffineMap> maps(3, AffineMap{-15, 30});
  const Polynomial q = affine_substitute(p, maps);
  oracle::Rng rng(14);
  for (int k = 0; k < 20; ++k) {
    std::vector<Rational> u, x;
    for (int i = 0; i < 3; ++i) {
      u.push_back(oracle::random_in(rng, 0, 1));
      x.push_back(-15 + 30 * u.back());
    }
    CHECK(q.evaluate(u) == p.evaluate(x));
  }
}

TEST_CASE("partial degree split") {
  // (2x^2 - x) e1 + x^2 e2 + (x^2 - x) e3 + x e1 e2 over (x, e1, e2, e3).
  auto v = [](std::size_t i) { return Polynomial::variable(4, i); };
  const Polynomial x = v(0);
  const Polynomial two = Polynomial::constant(4, 2);
  const Polynomial p = (two * x * x - x) * v(1) + x * x * v(2) + (x * x - x) * v(3) + x * v(1) * v(2);
  const DegreeSplit split = partial_degree_split(p, 1);
  REQUIRE(split.linear.size() == 3);
  CHECK(split.linear[0] == Polynomial::constant(1, 2) * x1() * x1() - x1());
  CHECK(split.linear[1] == x1() * x1());
  CHECK(split.linear[2] == x1() * x1() - x1());
  CHECK(split.remainder == x * v(1) * v(2));

  const DegreeSplit pure = partial_degree_split(v(1) * v(2), 1);
  for (const auto& s : pure.linear) CHECK(s.is_zero());
  CHECK(pure.remainder == v(1) * v(2));

  CHECK_THROWS_AS(partial_degree_split(p + x, 1), SplitError);
}

TEST_CASE("split reconstruction on random cubics") {
  oracle::Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    // Random cubic in (x1, x2, e1, e2) with every term carrying some e.
    Polynomial p(4);
    std::uniform_int_distribution<int> ex(0, 2), c(-5, 5);
    for (int t = 0; t < 8; ++t) {
      std::vector<std::uint16_t> e = {static_cast<std::uint16_t>(ex(rng) % 2), static_cast<std::uint16_t>(ex(rng) % 2),
                                      static_cast<std::uint16_t>(ex(rng) % 2), static_cast<std::uint16_t>(ex(rng) % 2)};
      if (e[2] + e[3] == 0) e[2] = 1;
      p.add_term(Monomial(e), c(rng));
    }
    const DegreeSplit split = partial_degree_split(p, 2);
    Polynomial rebuilt = split.remainder;
    const std::vector<std::size_t> embed_x = {0, 1};
    for (std::size_t j = 0; j < 2; ++j) rebuilt += split.linear[j].embed(4, embed_x) * Polynomial::variable(4, 2 + j);
    CHECK(rebuilt == p);
  }
}

TEST_CASE("interval evaluation") {
  // l' of the overview, term-wise over [0,1] x [-1,1]^3.
  auto v = [](std::size_t i) { return Polynomial::variable(4, i); };
  const Polynomial x = v(0), two = Polynomial::constant(4, 2);
  const Polynomial lp = (two * x * x - x) * v(1) + x * x * v(2) + (x * x - x) * v(3);
  const std::vector<Interval> box = {{0, 1}, {-1, 1}, {-1, 1}, {-1, 1}};
  const Interval r = interval_eval(lp, box);
  CHECK(r.contains(Interval(Rational(-9, 4), Rational(9, 4))));

  const Interval c = interval_eval(Polynomial::constant(2, 5), std::vector<Interval>{{0, 1}, {0, 1}});
  CHECK(c == Interval(Rational(5)));

  oracle::Rng rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    const Polynomial p = random_poly(rng, 2, 6, 3);
    const std::vector<Interval> b = {{-1, Rational(1, 2)}, {Rational(1, 3), 2}};
    const Interval enc = interval_eval(p, b);
    for (int k = 0; k < 100; ++k) {
      const std::vector<Rational> pt = {oracle::random_in(rng, b[0].lo, b[0].hi), oracle::random_in(rng, b[1].lo, b[1].hi)};
      CHECK(enc.contains(p.evaluate(pt)));
    }
  }
}

TEST_CASE("interval construction rejects reversed endpoints") {
  CHECK_THROWS(Interval(Rational(1), Rational(0)));
  CHECK(pow(Interval(-1, 2), 2) == Interval(0, 4));
}
