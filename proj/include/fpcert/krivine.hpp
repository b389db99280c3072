#pragma once

#include "fpcert/lpsolve.hpp"
#include "fpcert/polynomial.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fpcert {

// Block j (0-based) holds x_1..x_n and e_j; variables n+j in the joint (x, e) space.
struct SparsityPattern {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<std::size_t>> blocks;

  static SparsityPattern for_error_problem(std::size_t n, std::size_t m);
  bool covers_all_variables() const;
  bool running_intersection() const;
};

// x^a (1-x)^b (1/2 + e/2)^g (1/2 - e/2)^d over the local variables (x_1..x_n, e).
struct HandelmanIndex {
  std::vector<unsigned> lower;  // a, exponents of x_i
  std::vector<unsigned> upper;  // b, exponents of 1 - x_i
  unsigned e_plus = 0;          // g
  unsigned e_minus = 0;         // d

  unsigned degree() const;
  bool x_only() const { return e_plus == 0 && e_minus == 0; }
  friend bool operator==(const HandelmanIndex&, const HandelmanIndex&) = default;
};

struct HandelmanProduct {
  HandelmanIndex index;
  Polynomial poly;  // over n + 1 local variables, the last one is e
};

// All products with a + b + g + d <= k, graded by degree. Count is C(2(n+1)+k, k).
std::vector<HandelmanProduct> gen_handelman_products(std::size_t n, unsigned k);

// Factored evaluation of one product at a local point (x_1..x_n, e).
Rational evaluate_product(const HandelmanIndex& idx, const std::vector<Rational>& point);

enum class Direction { Lower, Upper };

struct LPSize {
  Integer columns;
  Integer rows;
};

// Lower: maximize t s.t. sum lambda h + t = l'. Upper: minimize t s.t. sum lambda h - t = -l'.
struct KSRelaxation {
  std::size_t n = 0;
  std::size_t m = 0;
  unsigned order = 0;
  Direction direction = Direction::Lower;
  std::vector<HandelmanProduct> products;  // shared local products
  struct Column {
    std::size_t block;
    std::size_t product;
  };
  std::vector<Column> columns;  // lambda columns; t comes last
  std::vector<Monomial> rows;   // joint monomials, graded lex ascending
  Polynomial target;            // l' = sum_j s_j e_j over n + m variables

  std::size_t column_count() const { return columns.size() + 1; }
  std::size_t row_count() const { return rows.size(); }
  std::string column_name(std::size_t col) const;

  // Product of column `col` written in the joint variables.
  Polynomial column_polynomial(std::size_t col) const;

  RationalLP to_standard_form() const;
};

// l' = sum_j s_j(u) e_j in the joint space.
Polynomial scaled_linear_part(const std::vector<Polynomial>& s, std::size_t n);

unsigned linear_part_degree(const std::vector<Polynomial>& s);

KSRelaxation build_lp(const std::vector<Polynomial>& s, std::size_t n, unsigned order, Direction direction);

LPSize nominal_size(std::size_t n, std::size_t m, unsigned order);
LPSize dense_size(std::size_t n, std::size_t m, unsigned order);

struct Certificate {
  Direction direction = Direction::Lower;
  Rational t;
  Rational certified;          // sound bound on l' in this direction
  Interval residual_range;     // enclosure of the certificate mismatch over the domain
  Rational residual_width() const { return residual_range.width(); }
};

// Sound for any t and lambda: negative weights are clamped to zero first.
// `lambda` is indexed by lambda column (without t).
Certificate certify(const KSRelaxation& lp, const Rational& t, std::vector<Rational> lambda);

// Sum of lambda h over the columns of each block, in the joint variables.
std::vector<Polynomial> block_certificates(const KSRelaxation& lp, const std::vector<Rational>& lambda);

enum class LPMode { Auto, Exact, Float };

struct KrivineOptions {
  unsigned order_increment = 0;
  std::optional<unsigned> order;  // overrides the default degree of l'
  LPMode mode = LPMode::Auto;
  std::size_t exact_auto_columns = 2000;
  std::size_t exact_auto_rows = 300;
  SolverOptions solver;
  double lambda_noise = 0;  // uniform perturbation of float weights before certification
  unsigned noise_seed = 1;
  int dyadic_bits = 64;
};

struct DirectionResult {
  Direction direction = Direction::Lower;
  LPStatus status = LPStatus::NumericalFailure;
  Rational raw_objective;
  Certificate certificate;
  std::size_t iterations = 0;
  std::size_t presolved_columns = 0;
  std::size_t presolved_rows = 0;
  bool exact = false;
};

struct KrivineResult {
  Rational bound;  // max(|certified lower|, |certified upper|)
  unsigned order = 0;
  DirectionResult lower;
  DirectionResult upper;
  std::size_t columns = 0;  // nominal, including t
  std::size_t rows = 0;
  std::size_t presolved_columns = 0;
  std::size_t presolved_rows = 0;
  LPSize dense;
  bool exact = false;
};

DirectionResult solve_and_certify(const KSRelaxation& lp, const KrivineOptions& opts = {});

KrivineResult krivine_bound(const std::vector<Polynomial>& s, std::size_t n, const KrivineOptions& opts = {});

}  // namespace fpcert
