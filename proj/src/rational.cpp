#include "fpcert/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

namespace fpcert {

namespace {

Integer pow10(unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

Integer pow2(unsigned e) {
  Integer r = 1;
  mpz_mul_2exp(r.get_mpz_t(), r.get_mpz_t(), e);
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational ten_to(long e) {
  if (e >= 0) return Rational(pow10(static_cast<unsigned>(e)));
  return Rational(Integer(1), pow10(static_cast<unsigned>(-e)));
}

Integer ceil_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> RationalFormatError {
    return RationalFormatError("malformed rational literal '" + original + "'");
  };
  if (text.empty()) throw fail();
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational value;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    Integer d(std::string(den), 10);
    if (d == 0) throw fail();
    value = Rational(Integer(std::string(num), 10), d);
    value.canonicalize();
  } else {
    std::string_view mantissa = text;
    long exponent = 0;
    if (auto epos = text.find_first_of("eE"); epos != std::string_view::npos) {
      mantissa = text.substr(0, epos);
      auto exp_text = text.substr(epos + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) throw fail();
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
    }
    std::string_view int_part = mantissa;
    std::string_view frac_part;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
      int_part = mantissa.substr(0, dot);
      frac_part = mantissa.substr(dot + 1);
      if (!frac_part.empty() && !all_digits(frac_part)) throw fail();
      if (int_part.empty() && frac_part.empty()) throw fail();
    }
    if (!int_part.empty() && !all_digits(int_part)) throw fail();
    if (int_part.empty() && frac_part.empty()) throw fail();
    std::string digits = std::string(int_part) + std::string(frac_part);
    Integer n(digits.empty() ? std::string("0") : digits, 10);
    value = Rational(n) * ten_to(exponent - static_cast<long>(frac_part.size()));
    value.canonicalize();
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Rational from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("from_double: non-finite value");
  Rational q(v);  // exact: mpq_set_d is exact for finite doubles
  return q;
}

Rational truncate_dyadic(double v, int bits) {
  if (!std::isfinite(v)) throw std::domain_error("truncate_dyadic: non-finite value");
  const double scaled = std::ldexp(v, bits);
  const double truncated = std::trunc(scaled);
  Rational q = from_double(truncated);
  Integer den = pow2(static_cast<unsigned>(bits));
  q /= Rational(den);
  return q;
}

bool is_power_of_two(const Rational& q) {
  if (q <= 0) return false;
  auto single_bit = [](const Integer& z) { return mpz_popcount(z.get_mpz_t()) == 1; };
  return single_bit(q.get_num()) && single_bit(q.get_den());
}

bool is_representable(const Rational& q, int significand_bits) {
  if (q == 0) return true;
  if (mpz_popcount(q.get_den_mpz_t()) != 1) return false;
  Integer odd = q.get_num();
  if (odd < 0) odd = -odd;
  const auto trailing = mpz_scan1(odd.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(odd.get_mpz_t(), odd.get_mpz_t(), trailing);
  return mpz_sizeinbase(odd.get_mpz_t(), 2) <= static_cast<std::size_t>(significand_bits);
}

bool has_finite_decimal(const Rational& q) {
  Integer d = q.get_den();
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) d /= 2;
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) d /= 5;
  return d == 1;
}

std::string to_exact_decimal(const Rational& q) {
  if (!has_finite_decimal(q)) throw std::invalid_argument("to_exact_decimal: non-terminating decimal");
  unsigned twos = 0, fives = 0;
  Integer d = q.get_den();
  while (mpz_divisible_ui_p(d.get_mpz_t(), 2)) { d /= 2; ++twos; }
  while (mpz_divisible_ui_p(d.get_mpz_t(), 5)) { d /= 5; ++fives; }
  const unsigned places = std::max(twos, fives);
  Integer scaled = q.get_num() * pow10(places) / q.get_den();
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str();
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

std::string to_decimal_upper(const Rational& q, int digits) {
  if (q == 0) return "0";
  if (digits < 1) digits = 1;
  const Rational mag = abs(q);
  // Locate E with 10^E <= mag < 10^(E+1).
  long e = static_cast<long>(std::floor(std::log10(mag.get_d())));
  while (ten_to(e) > mag) --e;
  while (ten_to(e + 1) <= mag) ++e;
  const long shift = e - digits + 1;
  Rational scaled = mag / ten_to(shift);
  Integer mant = q > 0 ? ceil_div(scaled.get_num(), scaled.get_den())
                       : floor_div(scaled.get_num(), scaled.get_den());
  if (mant == pow10(static_cast<unsigned>(digits))) {
    mant = pow10(static_cast<unsigned>(digits - 1));
    ++e;
  }
  std::string s = mant.get_str();
  if (s.size() > 1) s.insert(1, ".");
  std::string out = (q < 0 ? "-" : "") + s + "e" + (e < 0 ? "-" : "+");
  const long ae = e < 0 ? -e : e;
  out += (ae < 10 ? "0" : "") + std::to_string(ae);
  return out;
}

double to_double(const Rational& q) {
  double d = q.get_d();  // truncates toward zero
  const double other = std::nextafter(d, q > 0 ? std::numeric_limits<double>::infinity()
                                               : -std::numeric_limits<double>::infinity());
  if (!std::isfinite(other)) return d;
  const Rational err_d = abs(Rational(q - from_double(d)));
  const Rational err_o = abs(Rational(q - from_double(other)));
  return err_o < err_d ? other : d;
}

double to_double_up(const Rational& q) {
  double d = q.get_d();
  while (std::isfinite(d) && from_double(d) < q) d = std::nextafter(d, std::numeric_limits<double>::infinity());
  return d;
}

}  // namespace fpcert
