#include "fpcert/polynomial.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace fpcert {

namespace {

constexpr unsigned kMaxExponent = std::numeric_limits<std::uint16_t>::max();

void check_same_ring(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars())
    throw std::invalid_argument("polynomial ring mismatch: " + std::to_string(a.nvars()) + " vs " +
                                std::to_string(b.nvars()) + " variables");
}

}  // namespace

Monomial::Monomial(std::vector<std::uint16_t> exps) : exps_(std::move(exps)) {
  for (auto e : exps_) degree_ += e;
}

Monomial Monomial::variable(std::size_t nvars, std::size_t index, unsigned power) {
  Monomial m(nvars);
  m.set(index, power);
  return m;
}

void Monomial::set(std::size_t i, unsigned power) {
  if (power >= kMaxExponent) throw std::overflow_error("monomial exponent overflow");
  degree_ = degree_ - exps_.at(i) + power;
  exps_[i] = static_cast<std::uint16_t>(power);
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (nvars() != other.nvars()) throw std::invalid_argument("monomial ring mismatch");
  Monomial r(*this);
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    const unsigned s = unsigned(exps_[i]) + other.exps_[i];
    if (s >= kMaxExponent) throw std::overflow_error("monomial exponent overflow");
    r.exps_[i] = static_cast<std::uint16_t>(s);
  }
  r.degree_ = degree_ + other.degree_;
  return r;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Monomial(nvars), c);
  return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw std::out_of_range("variable index out of range");
  Polynomial p(nvars);
  p.add_term(Monomial::variable(nvars, index), Rational(1));
  return p;
}

Polynomial Polynomial::monomial(const Monomial& m, const Rational& c) {
  Polynomial p(m.nvars());
  p.add_term(m, c);
  return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coefficient(Monomial(nvars_)); }

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (m.nvars() != nvars_) throw std::invalid_argument("monomial does not match polynomial ring");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_same_ring(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_same_ring(*this, other);
  for (const auto& [m, c] : other.terms_) add_term(m, Rational(-c));
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, coef] : terms_) coef *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_same_ring(a, b);
  Polynomial r(a.nvars());
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, Rational(ca * cb));
  return r;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(*this);
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

std::vector<unsigned> Polynomial::multidegree() const {
  std::vector<unsigned> d(nvars_, 0);
  for (const auto& [m, c] : terms_)
    for (std::size_t i = 0; i < nvars_; ++i) d[i] = std::max<unsigned>(d[i], m[i]);
  return d;
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

Rational Polynomial::evaluate(std::span<const Rational> point) const {
  if (point.size() != nvars_) throw std::invalid_argument("evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational term = c;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      Rational pw;
      mpz_pow_ui(pw.get_num_mpz_t(), point[i].get_num_mpz_t(), m[i]);
      mpz_pow_ui(pw.get_den_mpz_t(), point[i].get_den_mpz_t(), m[i]);
      term *= pw;
    }
    sum += term;
  }
  return sum;
}

Polynomial Polynomial::pow(unsigned k) const {
  Polynomial result = constant(nvars_, Rational(1));
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::embed(std::size_t new_nvars, std::span<const std::size_t> mapping) const {
  if (mapping.size() != nvars_) throw std::invalid_argument("embed: mapping size mismatch");
  Polynomial r(new_nvars);
  for (const auto& [m, c] : terms_) {
    Monomial nm(new_nvars);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (m[i] != 0) nm.set(mapping[i], nm[mapping[i]] + m[i]);
    r.add_term(nm, c);
  }
  return r;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  auto name = [&](std::size_t i) {
    return i < names.size() ? names[i] : "x" + std::to_string(i + 1);
  };
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      out << (negative ? "-" : "");
    else
      out << (negative ? " - " : " + ");
    first = false;
    bool wrote = false;
    if (m.degree() == 0 || mag != 1) {
      out << fpcert::to_string(mag);
      wrote = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (m[i] == 0) continue;
      if (wrote) out << '*';
      out << name(i);
      if (m[i] > 1) out << '^' << m[i];
      wrote = true;
    }
  }
  return out.str();
}

Interval::Interval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) throw std::invalid_argument("interval with lo > hi");
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {min(min(p1, p2), min(p3, p4)), max(max(p1, p2), max(p3, p4))};
}

Interval operator*(const Rational& c, const Interval& a) {
  Rational x = c * a.lo, y = c * a.hi;
  return c < 0 ? Interval(y, x) : Interval(x, y);
}

Interval pow(const Interval& a, unsigned k) {
  if (k == 0) return Interval(Rational(1));
  auto p = [](const Rational& v, unsigned e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), v.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), v.get_den_mpz_t(), e);
    return r;
  };
  Rational lo = p(a.lo, k), hi = p(a.hi, k);
  if (k % 2 == 1) return {lo, hi};
  if (a.lo >= 0) return {lo, hi};
  if (a.hi <= 0) return {hi, lo};
  return {Rational(0), max(lo, hi)};
}

Interval hull(const Interval& a, const Interval& b) { return {min(a.lo, b.lo), max(a.hi, b.hi)}; }

Interval interval_eval(const Polynomial& p, std::span<const Interval> box) {
  if (box.size() != p.nvars()) throw std::invalid_argument("interval_eval: box has wrong dimension");
  std::map<std::pair<std::size_t, unsigned>, Interval> powers;
  auto power = [&](std::size_t i, unsigned e) -> const Interval& {
    auto key = std::make_pair(i, e);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, pow(box[i], e)).first;
    return it->second;
  };
  Interval sum(Rational(0));
  for (const auto& [m, c] : p.terms()) {
    Interval term(c);
    for (std::size_t i = 0; i < p.nvars(); ++i)
      if (m[i] != 0) term = term * power(i, m[i]);
    sum = sum + term;
  }
  return sum;
}

Polynomial affine_substitute(const Polynomial& p, std::span<const AffineMap> maps) {
  if (maps.size() != p.nvars()) throw std::invalid_argument("affine_substitute: map count mismatch");
  Polynomial current = p;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const auto& [offset, slope] = maps[i];
    if (offset == 0 && slope == 1) continue;
    Polynomial next(p.nvars());
    for (const auto& [m, c] : current.terms()) {
      const unsigned a = m[i];
      if (a == 0) {
        next.add_term(m, c);
        continue;
      }
      // x^a = sum_b C(a,b) offset^(a-b) slope^b u^b
      for (unsigned b = 0; b <= a; ++b) {
        Rational coef = c * Rational(binomial(a, b));
        for (unsigned t = 0; t < a - b; ++t) coef *= offset;
        for (unsigned t = 0; t < b; ++t) coef *= slope;
        if (coef == 0) continue;
        Monomial nm = m;
        nm.set(i, b);
        next.add_term(nm, coef);
      }
    }
    current = std::move(next);
  }
  return current;
}

DegreeSplit partial_degree_split(const Polynomial& p, std::size_t n) {
  if (n > p.nvars()) throw std::invalid_argument("partial_degree_split: n exceeds variable count");
  const std::size_t m = p.nvars() - n;
  DegreeSplit out{std::vector<Polynomial>(m, Polynomial(n)), Polynomial(p.nvars())};
  for (const auto& [mono, c] : p.terms()) {
    unsigned edeg = 0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mono[n + j] != 0) {
        edeg += mono[n + j];
        last = j;
      }
    }
    if (edeg == 0) throw SplitError("polynomial has a nonzero part free of error variables");
    if (edeg == 1) {
      std::vector<std::uint16_t> xs(mono.exponents().begin(), mono.exponents().begin() + long(n));
      out.linear[last].add_term(Monomial(std::move(xs)), c);
    } else {
      out.remainder.add_term(mono, c);
    }
  }
  return out;
}

}  // namespace fpcert
