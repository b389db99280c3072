#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fpcert {

// Arbitrary-precision rational. All certified quantities flow through this type.
using Rational = mpq_class;
using Integer = mpz_class;

struct RationalFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses "12", "-0.125", "1.5e-3", "3/7", "-1/6". Decimals are read exactly.
Rational parse_rational(std::string_view text);

// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& q);

Rational abs(const Rational& q);
Rational max(const Rational& a, const Rational& b);
Rational min(const Rational& a, const Rational& b);

Integer binomial(unsigned n, unsigned k);

// Exact value of a finite double.
Rational from_double(double v);

// Truncates toward zero onto the grid 2^-bits. Always a dyadic rational.
Rational truncate_dyadic(double v, int bits);

// Power of two check for positive rationals (2^k, k in Z).
bool is_power_of_two(const Rational& q);

// True iff q = integer * 2^exp with |integer| < 2^significand_bits.
bool is_representable(const Rational& q, int significand_bits);

// True iff the decimal expansion of q terminates (denominator is 2^a 5^b).
bool has_finite_decimal(const Rational& q);

// Exact decimal expansion; requires has_finite_decimal(q).
std::string to_exact_decimal(const Rational& q);

// Scientific notation with `digits` significant digits, rounded toward +inf
// so the rendered value is >= q.
std::string to_decimal_upper(const Rational& q, int digits);

// Nearest double (round to nearest) and an upward-rounded double.
double to_double(const Rational& q);
double to_double_up(const Rational& q);

}  // namespace fpcert
