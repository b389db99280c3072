#pragma once

#include "fpcert/polynomial.hpp"
#include "fpcert/rational.hpp"

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fpcert {

struct Expr;
// Immutable and shareable: `x^k` desugars into a chain reusing the same base node.
using ExprPtr = std::shared_ptr<const Expr>;

struct Constant {
  Rational value;
};
struct Variable {
  std::size_t index;
};
struct Neg {
  ExprPtr child;
};
struct Add {
  ExprPtr left, right;
};
struct Sub {
  ExprPtr left, right;
};
struct Mul {
  ExprPtr left, right;
};

struct Expr {
  std::variant<Constant, Variable, Neg, Add, Sub, Mul> node;
};

ExprPtr make_constant(Rational value);
ExprPtr make_variable(std::size_t index);
ExprPtr make_neg(ExprPtr child);
ExprPtr make_add(ExprPtr left, ExprPtr right);
ExprPtr make_sub(ExprPtr left, ExprPtr right);
ExprPtr make_mul(ExprPtr left, ExprPtr right);

bool structurally_equal(const Expr& a, const Expr& b);

struct InputVariable {
  std::string name;
  Rational lo;
  Rational hi;
};

struct ProgramSpec {
  std::string name = "program";
  std::vector<InputVariable> inputs;  // canonical variable order
  ExprPtr body;
  // Tokens from `# convention: ...` comment lines, e.g. "share-subexpressions".
  std::set<std::string> conventions;

  std::size_t n() const { return inputs.size(); }
  std::vector<std::string> variable_names() const;
  std::vector<Interval> box() const;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UndeclaredVariable, DuplicateDeclaration, MalformedRational, Unsupported };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

// Grammar:
//   program := "vars" decl ("," decl)* ";" expr
//   decl    := ident "in" "[" rational "," rational "]"
// `#` starts a comment. `# name: foo` names the program; `# convention: tok ...` records tokens.
ProgramSpec parse_program(std::string_view text, std::string name = "program");
ProgramSpec load_program(const std::string& path);

std::string pretty_print(const Expr& e, std::span<const std::string> names);
std::string pretty_print(const ProgramSpec& spec);

// Exact polynomial over n variables equal to the expression.
Polynomial flatten(const ExprPtr& body, std::size_t n);

Rational evaluate(const Expr& e, std::span<const Rational> point);

}  // namespace fpcert
