#pragma once

#include "fpcert/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace fpcert {

// Exponent vector of fixed length. Per-variable degrees must stay below 2^16.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint16_t> exps);

  static Monomial variable(std::size_t nvars, std::size_t index, unsigned power = 1);

  std::size_t nvars() const { return exps_.size(); }
  unsigned degree() const { return degree_; }
  std::uint16_t operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<std::uint16_t>& exponents() const { return exps_; }

  void set(std::size_t i, unsigned power);

  Monomial operator*(const Monomial& other) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }

 private:
  std::vector<std::uint16_t> exps_;
  unsigned degree_ = 0;
};

// Graded lexicographic order with x1 > x2 > ... ; ascending.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.exponents() < b.exponents();
  }
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, GrlexLess>;

  explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(std::size_t nvars, const Rational& c);
  static Polynomial variable(std::size_t nvars, std::size_t index);
  static Polynomial monomial(const Monomial& m, const Rational& c);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;

  // Adds c*m, dropping the term if it cancels.
  void add_term(const Monomial& m, const Rational& c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }
  Polynomial operator-() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  std::vector<unsigned> multidegree() const;
  unsigned total_degree() const;

  Rational evaluate(std::span<const Rational> point) const;
  Polynomial pow(unsigned k) const;

  // Re-indexes variables: variable i becomes variable `mapping[i]` in a ring of new_nvars.
  Polynomial embed(std::size_t new_nvars, std::span<const std::size_t> mapping) const;

  // Canonical text `c*x1^a*x2^b + ...`, descending graded-lex order.
  std::string to_string(std::span<const std::string> names = {}) const;

 private:
  std::size_t nvars_ = 0;
  Terms terms_;
};

inline Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
inline Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }
inline Polynomial scale(const Rational& c, const Polynomial& p) { return c * p; }

// Closed interval with rational endpoints, lo <= hi.
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  explicit Interval(const Rational& point) : lo(point), hi(point) {}
  Interval(Rational l, Rational h);

  static Interval symmetric(const Rational& radius) { return Interval(-radius, radius); }

  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }
  Rational magnitude() const { return max(abs(lo), abs(hi)); }
  Rational width() const { return hi - lo; }

  friend bool operator==(const Interval& a, const Interval& b) { return a.lo == b.lo && a.hi == b.hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator*(const Rational& c, const Interval& a);
// Even powers of intervals straddling zero are tight ([0, max^k]).
Interval pow(const Interval& a, unsigned k);
Interval hull(const Interval& a, const Interval& b);

// Term-wise enclosure: sum over terms of coefficient * prod of interval powers.
Interval interval_eval(const Polynomial& p, std::span<const Interval> box);

struct AffineMap {
  Rational offset;
  Rational slope;
};

// q(u) = p(offset + slope * u), componentwise.
Polynomial affine_substitute(const Polynomial& p, std::span<const AffineMap> maps);

struct DegreeSplit {
  std::vector<Polynomial> linear;  // s_1..s_m over the first n variables
  Polynomial remainder;            // terms of degree >= 2 in the last m variables
};

struct SplitError : std::logic_error {
  using std::logic_error::logic_error;
};

// Splits p over (x_1..x_n, e_1..e_m) into sum_j s_j(x) e_j + remainder.
// Throws SplitError when p has a nonzero part of degree 0 in e.
DegreeSplit partial_degree_split(const Polynomial& p, std::size_t n);

}  // namespace fpcert
