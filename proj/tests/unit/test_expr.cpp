#include "fpcert/bench.hpp"
#include "fpcert/expr.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace fpcert;

TEST_CASE("parse rigidBody1") {
  const auto spec = parse_program(
      "vars x1 in [-15,15], x2 in [-15,15], x3 in [-15,15]; -x1*x2 - 2*x2*x3 - x1 - x3", "rigidBody1");
  CHECK(spec.n() == 3);
  CHECK(spec.name == "rigidBody1");
  CHECK(spec.inputs[1].lo == -15);
  CHECK(spec.inputs[2].hi == 15);
  const auto names = spec.variable_names();
  CHECK(flatten(spec.body, 3).to_string(names) == "-x1*x2 - 2*x2*x3 - x1 - x3");
}

TEST_CASE("parse overview into Sub(Mul(x,x), x)") {
  const auto spec = parse_program("vars x in [0,1]; x*x - x");
  const auto* sub = std::get_if<Sub>(&spec.body->node);
  REQUIRE(sub);
  const auto* mul = std::get_if<Mul>(&sub->left->node);
  REQUIRE(mul);
  CHECK(std::get<Variable>(mul->left->node).index == 0);
  CHECK(std::get<Variable>(mul->right->node).index == 0);
  CHECK(std::get<Variable>(sub->right->node).index == 0);
  const Polynomial x = Polynomial::variable(1, 0);
  CHECK(flatten(spec.body, 1) == x * x - x);
}

TEST_CASE("parse errors") {
  auto kind_of = [](const char* text) {
    try {
      parse_program(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("expected a parse error");
    return ParseError::Kind::Syntax;
  };
  CHECK(kind_of("vars x in [0,1]; x - y") == ParseError::Kind::UndeclaredVariable);
  CHECK(kind_of("vars x in [0,1], x in [0,2]; x") == ParseError::Kind::DuplicateDeclaration);
  CHECK(kind_of("vars x in [0,1/0]; x") == ParseError::Kind::MalformedRational);
  CHECK(kind_of("vars x in [0,1]; x / 2") == ParseError::Kind::Unsupported);
  CHECK(kind_of("vars x in [0,1]; (x + ") == ParseError::Kind::Syntax);
  CHECK(kind_of("vars x in [2,1]; x") == ParseError::Kind::Syntax);
  try {
    parse_program("vars x in [0,1];\n  x + z");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 7);
  }
}

TEST_CASE("decimal constants stay exact") {
  const auto spec = parse_program("vars x in [-2,2]; 0.954929658551372*x");
  const auto& mul = std::get<Mul>(spec.body->node);
  CHECK(std::get<Constant>(mul.left->node).value * Rational(mpz_class("1000000000000000")) == Rational(mpz_class("954929658551372")));
}

TEST_CASE("power sugar shares the base") {
  const auto spec = parse_program("vars x in [0,1]; (x + 1)^3");
  const auto& outer = std::get<Mul>(spec.body->node);
  const auto& inner = std::get<Mul>(outer.left->node);
  CHECK(inner.left.get() == inner.right.get());
  CHECK(outer.right.get() == inner.left.get());
  const Polynomial x = Polynomial::variable(1, 0), one = Polynomial::constant(1, 1);
  CHECK(flatten(spec.body, 1) == (x + one).pow(3));
}

TEST_CASE("flatten edge cases") {
  CHECK(flatten(make_constant(0), 2).is_zero());
  CHECK(flatten(make_neg(make_variable(1)), 2) == -Polynomial::variable(2, 1));
}

TEST_CASE("flatten agrees with tree evaluation on ex-2-2-2") {
  const ProgramSpec spec = generate_ex(2, 2, 2);
  const Polynomial p = flatten(spec.body, 2);
  oracle::Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    const auto x = oracle::random_point(rng, spec);
    CHECK(p.evaluate(x) == evaluate(*spec.body, x));
  }
  // 3 copies of (x1 + x2)^2.
  const Polynomial s = Polynomial::variable(2, 0) + Polynomial::variable(2, 1);
  CHECK(p == Polynomial::constant(2, 3) * s * s);
}

TEST_CASE("semantic equality on random programs") {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const ProgramSpec spec = oracle::random_program(rng);
    const Polynomial p = flatten(spec.body, spec.n());
    for (int k = 0; k < 10; ++k) {
      const auto x = oracle::random_point(rng, spec);
      CHECK(p.evaluate(x) == evaluate(*spec.body, x));
    }
  }
}

TEST_CASE("pretty print round trip") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const ProgramSpec spec = oracle::random_program(rng);
    const ProgramSpec again = parse_program(pretty_print(spec));
    CHECK(structurally_equal(*spec.body, *again.body));
    CHECK(again.n() == spec.n());
  }
  const ProgramSpec ex = generate_ex(2, 5, 2);
  const ProgramSpec ex_again = parse_program(pretty_print(ex));
  CHECK(ex_again.name == "ex-2-2-5");
  CHECK(ex_again.conventions.count("share-subexpressions") == 1);
  CHECK(structurally_equal(*ex.body, *ex_again.body));
}

TEST_CASE("comments and headers") {
  const auto spec = parse_program("# name: demo\n# convention: free-negation\nvars x in [0,1]; # trailing\n-x");
  CHECK(spec.name == "demo");
  CHECK(spec.conventions.count("free-negation") == 1);
}
