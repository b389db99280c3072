#pragma once

#include "fpcert/rational.hpp"

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fpcert {

enum class Sense { Minimize, Maximize };
enum class ColumnBound { Nonnegative, Free };
enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit, NumericalFailure };

const char* to_string(LPStatus s);

template <class T>
using SparseColumn = std::vector<std::pair<std::size_t, T>>;  // (row, value), rows ascending

// Equality-form LP: optimize c^T x subject to A x = b, x_j >= 0 or free.
template <class T>
struct StandardFormLP {
  std::size_t rows = 0;
  std::vector<SparseColumn<T>> columns;
  std::vector<T> b;
  std::vector<T> c;
  std::vector<ColumnBound> bounds;
  Sense sense = Sense::Maximize;
  std::vector<std::string> column_names;
  std::vector<std::string> row_names;

  std::size_t cols() const { return columns.size(); }
  std::size_t nonzeros() const;
  std::size_t add_column(std::string name, SparseColumn<T> entries, T cost, ColumnBound bound = ColumnBound::Nonnegative);
  // Throws std::invalid_argument on inconsistent dimensions or unsorted rows.
  void validate() const;
};

using RationalLP = StandardFormLP<Rational>;
using FloatLP = StandardFormLP<double>;

FloatLP to_float(const RationalLP& lp);

template <class T>
struct LPSolution {
  LPStatus status = LPStatus::NumericalFailure;
  std::vector<T> x;       // primal values per original column
  T objective{};          // c^T x in the LP's own sense
  std::vector<T> duals;   // y with reduced costs c - A^T y of the right sign at optimality
  std::size_t iterations = 0;
  double infeasibility = 0;  // max |A x - b| in double
};

struct SolverOptions {
  std::size_t max_iterations = 2'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::size_t exact_column_cap = 50'000;
  std::size_t degenerate_streak = 50;  // consecutive degenerate pivots before Bland's rule
  std::size_t refactor_interval = 64;
  bool scale = true;                   // float only
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
};

struct ExactCapExceeded : std::length_error {
  using std::length_error::length_error;
};

LPSolution<Rational> simplex_exact(const RationalLP& lp, const SolverOptions& opts = {});
LPSolution<double> simplex_float(const FloatLP& lp, const SolverOptions& opts = {});

// Removes empty rows and merges identical columns.
struct Presolved {
  RationalLP lp;
  std::vector<std::size_t> kept_columns;     // reduced column -> original column
  std::vector<std::size_t> kept_rows;        // reduced row -> original row
  bool infeasible = false;                   // an empty row has nonzero right-hand side
  std::size_t removed_rows = 0;
  std::size_t removed_columns = 0;

  template <class T>
  std::vector<T> expand_primal(const std::vector<T>& x, std::size_t original_cols) const;
  template <class T>
  std::vector<T> expand_duals(const std::vector<T>& y, std::size_t original_rows) const;
};

Presolved presolve(const RationalLP& lp);

// max |A x - b| evaluated in double.
template <class T>
double primal_residual(const StandardFormLP<T>& lp, const std::vector<T>& x);

// True iff x satisfies A x = b and the sign bounds exactly.
bool exactly_feasible(const RationalLP& lp, const std::vector<Rational>& x);

// For a dual vector y satisfying the reduced-cost sign conditions, b^T y bounds
// the optimum (from above for maximization). nullopt when y is not dual feasible.
std::optional<Rational> dual_objective_bound(const RationalLP& lp, const std::vector<Rational>& y);

// CPLEX-style LP text. Coefficients are exact decimals when they terminate,
// otherwise a rounded decimal followed by a "\ exact p/q" comment line.
void write_lp(std::ostream& out, const RationalLP& lp);
RationalLP read_lp(std::istream& in);

struct LPFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fpcert
