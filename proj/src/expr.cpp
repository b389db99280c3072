#include "fpcert/expr.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace fpcert {

ExprPtr make_constant(Rational value) { return std::make_shared<const Expr>(Expr{Constant{std::move(value)}}); }
ExprPtr make_variable(std::size_t index) { return std::make_shared<const Expr>(Expr{Variable{index}}); }
ExprPtr make_neg(ExprPtr child) { return std::make_shared<const Expr>(Expr{Neg{std::move(child)}}); }
ExprPtr make_add(ExprPtr l, ExprPtr r) { return std::make_shared<const Expr>(Expr{Add{std::move(l), std::move(r)}}); }
ExprPtr make_sub(ExprPtr l, ExprPtr r) { return std::make_shared<const Expr>(Expr{Sub{std::move(l), std::move(r)}}); }
ExprPtr make_mul(ExprPtr l, ExprPtr r) { return std::make_shared<const Expr>(Expr{Mul{std::move(l), std::move(r)}}); }

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const Constant& c) { return c.value == std::get<Constant>(b.node).value; },
          [&](const Variable& v) { return v.index == std::get<Variable>(b.node).index; },
          [&](const Neg& n) { return structurally_equal(*n.child, *std::get<Neg>(b.node).child); },
          [&](const Add& x) {
            const auto& y = std::get<Add>(b.node);
            return structurally_equal(*x.left, *y.left) && structurally_equal(*x.right, *y.right);
          },
          [&](const Sub& x) {
            const auto& y = std::get<Sub>(b.node);
            return structurally_equal(*x.left, *y.left) && structurally_equal(*x.right, *y.right);
          },
          [&](const Mul& x) {
            const auto& y = std::get<Mul>(b.node);
            return structurally_equal(*x.left, *y.left) && structurally_equal(*x.right, *y.right);
          },
      },
      a.node);
}

std::vector<std::string> ProgramSpec::variable_names() const {
  std::vector<std::string> names;
  for (const auto& in : inputs) names.push_back(in.name);
  return names;
}

std::vector<Interval> ProgramSpec::box() const {
  std::vector<Interval> b;
  for (const auto& in : inputs) b.emplace_back(in.lo, in.hi);
  return b;
}

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, Plus, Minus, Star, Caret, LParen, RParen, LBracket, RBracket, Comma, Semicolon, Slash, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  Lexer(std::string_view text, ProgramSpec& spec) : text_(text), spec_(spec) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      const char c = text_[pos_];
      const std::size_t line = line_, col = col_;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) advance();
        out.push_back({Tok::Ident, std::string(text_.substr(start, pos_ - start)), line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        out.push_back({Tok::Number, number(), line, col});
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          case '^': k = Tok::Caret; break;
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case '[': k = Tok::LBracket; break;
          case ']': k = Tok::RBracket; break;
          case ',': k = Tok::Comma; break;
          case ';': k = Tok::Semicolon; break;
          case '/': k = Tok::Slash; break;
          default:
            throw ParseError(ParseError::Kind::Syntax, line, col, std::string("unexpected character '") + c + "'");
        }
        advance();
        out.push_back({k, std::string(1, c), line, col});
      }
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        std::size_t start = pos_ + 1;
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        directive(text_.substr(start, pos_ - start));
      } else {
        break;
      }
    }
  }

  void directive(std::string_view comment) {
    std::istringstream in{std::string(comment)};
    std::string key;
    in >> key;
    if (key == "name:") {
      std::string value;
      if (in >> value) spec_.name = value;
    } else if (key == "convention:") {
      std::string token;
      while (in >> token) spec_.conventions.insert(token);
    }
  }

  // digits [. digits] [e [sign] digits] [/ digits]
  std::string number() {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      digits();
    }
    if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      advance();
      digits();
    }
    // Trailing identifier characters make the literal malformed (e.g. "1.5x").
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' || text_[pos_] == '_')) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  ProgramSpec& spec_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, ProgramSpec& spec) : toks_(std::move(tokens)), spec_(spec) {}

  void program() {
    expect_keyword("vars");
    decl();
    while (peek().kind == Tok::Comma) {
      next();
      decl();
    }
    expect(Tok::Semicolon, "';' after declarations");
    spec_.body = expr();
    if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "' after expression");
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& t, const std::string& msg, ParseError::Kind kind = ParseError::Kind::Syntax) const {
    throw ParseError(kind, t.line, t.column, msg);
  }

  const Token& expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail(peek(), "expected " + what);
    return next();
  }

  void expect_keyword(const std::string& kw) {
    if (peek().kind != Tok::Ident || peek().text != kw) fail(peek(), "expected '" + kw + "'");
    next();
  }

  Rational literal(const Token& t, bool negative) const {
    try {
      Rational q = parse_rational(t.text);
      return negative ? Rational(-q) : q;
    } catch (const RationalFormatError& e) {
      fail(t, e.what(), ParseError::Kind::MalformedRational);
    }
  }

  Rational signed_rational() {
    bool negative = false;
    if (peek().kind == Tok::Minus || peek().kind == Tok::Plus) negative = next().kind == Tok::Minus;
    if (peek().kind != Tok::Number) fail(peek(), "expected rational bound");
    return literal(next(), negative);
  }

  void decl() {
    const Token& id = expect(Tok::Ident, "variable name");
    if (id.text == "vars" || id.text == "in") fail(id, "reserved word used as variable name");
    for (const auto& in : spec_.inputs)
      if (in.name == id.text) fail(id, "duplicate declaration of '" + id.text + "'", ParseError::Kind::DuplicateDeclaration);
    expect_keyword("in");
    expect(Tok::LBracket, "'['");
    Rational lo = signed_rational();
    expect(Tok::Comma, "','");
    Rational hi = signed_rational();
    const Token& close = expect(Tok::RBracket, "']'");
    if (hi < lo) fail(close, "empty range for '" + id.text + "'");
    spec_.inputs.push_back({id.text, lo, hi});
  }

  ExprPtr expr() {
    ExprPtr left = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool plus = next().kind == Tok::Plus;
      ExprPtr right = term();
      left = plus ? make_add(left, right) : make_sub(left, right);
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = unary();
    while (true) {
      if (peek().kind == Tok::Star) {
        next();
        left = make_mul(left, unary());
      } else if (peek().kind == Tok::Slash) {
        fail(peek(), "division is not supported (polynomial programs only)", ParseError::Kind::Unsupported);
      } else {
        return left;
      }
    }
  }

  ExprPtr unary() {
    if (peek().kind == Tok::Minus) {
      next();
      // A minus directly in front of a literal is part of the literal.
      if (peek().kind == Tok::Number && toks_[pos_ + 1].kind != Tok::Caret) return make_constant(literal(next(), true));
      return make_neg(unary());
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (peek().kind != Tok::Caret) return base;
    next();
    const Token& t = peek();
    if (t.kind != Tok::Number) fail(t, "exponent must be a nonnegative integer literal");
    next();
    Rational k;
    try {
      k = parse_rational(t.text);
    } catch (const RationalFormatError&) {
      fail(t, "exponent must be a nonnegative integer literal", ParseError::Kind::MalformedRational);
    }
    if (k.get_den() != 1 || k < 0 || k > 1000) fail(t, "exponent must be a nonnegative integer literal");
    const unsigned long e = k.get_num().get_ui();
    if (peek().kind == Tok::Caret) fail(peek(), "chained exponents are not supported");
    if (e == 0) return make_constant(Rational(1));
    ExprPtr result = base;
    for (unsigned long i = 1; i < e; ++i) result = make_mul(result, base);
    return result;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        next();
        return make_constant(literal(t, false));
      case Tok::Ident: {
        next();
        if (peek().kind == Tok::LParen) fail(t, "function '" + t.text + "' is not supported", ParseError::Kind::Unsupported);
        for (std::size_t i = 0; i < spec_.inputs.size(); ++i)
          if (spec_.inputs[i].name == t.text) return make_variable(i);
        fail(t, "undeclared variable '" + t.text + "'", ParseError::Kind::UndeclaredVariable);
      }
      case Tok::LParen: {
        next();
        ExprPtr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Slash:
        fail(t, "division is not supported (polynomial programs only)", ParseError::Kind::Unsupported);
      default:
        fail(t, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ProgramSpec& spec_;
};

std::string constant_text(const Rational& v) {
  return has_finite_decimal(v) ? to_exact_decimal(v) : to_string(v);
}

int precedence(const Expr& e) {
  return std::visit(overloaded{
                        [](const Constant& c) { return c.value < 0 ? 3 : 4; },
                        [](const Variable&) { return 4; },
                        [](const Neg&) { return 3; },
                        [](const Add&) { return 1; },
                        [](const Sub&) { return 1; },
                        [](const Mul&) { return 2; },
                    },
                    e.node);
}

void print(std::ostream& out, const Expr& e, std::span<const std::string> names) {
  auto child = [&](const ExprPtr& c, bool parens) {
    if (parens) out << '(';
    print(out, *c, names);
    if (parens) out << ')';
  };
  auto binary = [&](const ExprPtr& l, const ExprPtr& r, const char* op, int prec) {
    child(l, precedence(*l) < prec);
    out << ' ' << op << ' ';
    child(r, precedence(*r) <= prec);
  };
  std::visit(overloaded{
                 [&](const Constant& c) { out << constant_text(c.value); },
                 [&](const Variable& v) { out << (v.index < names.size() ? names[v.index] : "x" + std::to_string(v.index + 1)); },
                 [&](const Neg& n) {
                   out << '-';
                   const bool is_const = std::holds_alternative<Constant>(n.child->node);
                   child(n.child, is_const || precedence(*n.child) < 3);
                 },
                 [&](const Add& a) { binary(a.left, a.right, "+", 1); },
                 [&](const Sub& s) { binary(s.left, s.right, "-", 1); },
                 [&](const Mul& m) { binary(m.left, m.right, "*", 2); },
             },
             e.node);
}

}  // namespace

ProgramSpec parse_program(std::string_view text, std::string name) {
  ProgramSpec spec;
  spec.name = std::move(name);
  Lexer lexer(text, spec);
  Parser parser(lexer.run(), spec);
  parser.program();
  return spec;
}

ProgramSpec load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open program file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
  return parse_program(buf.str(), stem);
}

std::string pretty_print(const Expr& e, std::span<const std::string> names) {
  std::ostringstream out;
  print(out, e, names);
  return out.str();
}

std::string pretty_print(const ProgramSpec& spec) {
  std::ostringstream out;
  if (spec.name != "program") out << "# name: " << spec.name << "\n";
  if (!spec.conventions.empty()) {
    out << "# convention:";
    for (const auto& c : spec.conventions) out << ' ' << c;
    out << "\n";
  }
  out << "vars ";
  for (std::size_t i = 0; i < spec.inputs.size(); ++i) {
    const auto& in = spec.inputs[i];
    out << (i ? ", " : "") << in.name << " in [" << constant_text(in.lo) << ", " << constant_text(in.hi) << "]";
  }
  const auto names = spec.variable_names();
  out << ";\n" << pretty_print(*spec.body, names) << "\n";
  return out.str();
}

Polynomial flatten(const ExprPtr& body, std::size_t n) {
  std::unordered_map<const Expr*, Polynomial> memo;
  auto go = [&](auto&& self, const ExprPtr& e) -> Polynomial {
    if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
    Polynomial p = std::visit(
        overloaded{
            [&](const Constant& c) { return Polynomial::constant(n, c.value); },
            [&](const Variable& v) {
              if (v.index >= n) throw std::out_of_range("variable index exceeds input count");
              return Polynomial::variable(n, v.index);
            },
            [&](const Neg& x) { return -self(self, x.child); },
            [&](const Add& x) { return self(self, x.left) + self(self, x.right); },
            [&](const Sub& x) { return self(self, x.left) - self(self, x.right); },
            [&](const Mul& x) { return self(self, x.left) * self(self, x.right); },
        },
        e->node);
    memo.emplace(e.get(), p);
    return p;
  };
  return go(go, body);
}

Rational evaluate(const Expr& e, std::span<const Rational> point) {
  return std::visit(overloaded{
                        [&](const Constant& c) { return c.value; },
                        [&](const Variable& v) { return point[v.index]; },
                        [&](const Neg& x) { return Rational(-evaluate(*x.child, point)); },
                        [&](const Add& x) { return Rational(evaluate(*x.left, point) + evaluate(*x.right, point)); },
                        [&](const Sub& x) { return Rational(evaluate(*x.left, point) - evaluate(*x.right, point)); },
                        [&](const Mul& x) { return Rational(evaluate(*x.left, point) * evaluate(*x.right, point)); },
                    },
                    e.node);
}

}  // namespace fpcert
