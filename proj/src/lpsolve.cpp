#include "fpcert/lpsolve.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <unordered_map>

namespace fpcert {

const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration-limit";
    case LPStatus::TimeLimit: return "time-limit";
    case LPStatus::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

template <class T>
std::size_t StandardFormLP<T>::nonzeros() const {
  std::size_t nz = 0;
  for (const auto& col : columns) nz += col.size();
  return nz;
}

template <class T>
std::size_t StandardFormLP<T>::add_column(std::string name, SparseColumn<T> entries, T cost, ColumnBound bound) {
  columns.push_back(std::move(entries));
  c.push_back(std::move(cost));
  bounds.push_back(bound);
  column_names.push_back(std::move(name));
  return columns.size() - 1;
}

template <class T>
void StandardFormLP<T>::validate() const {
  if (b.size() != rows) throw std::invalid_argument("rhs length differs from row count");
  if (c.size() != columns.size() || bounds.size() != columns.size())
    throw std::invalid_argument("objective or bounds length differs from column count");
  if (!column_names.empty() && column_names.size() != columns.size())
    throw std::invalid_argument("column name count mismatch");
  if (!row_names.empty() && row_names.size() != rows) throw std::invalid_argument("row name count mismatch");
  for (const auto& col : columns) {
    for (std::size_t k = 0; k < col.size(); ++k) {
      if (col[k].first >= rows) throw std::invalid_argument("column entry row out of range");
      if (k > 0 && col[k].first <= col[k - 1].first) throw std::invalid_argument("column rows not strictly ascending");
    }
  }
}

template struct StandardFormLP<Rational>;
template struct StandardFormLP<double>;

FloatLP to_float(const RationalLP& lp) {
  FloatLP out;
  out.rows = lp.rows;
  out.sense = lp.sense;
  out.bounds = lp.bounds;
  out.column_names = lp.column_names;
  out.row_names = lp.row_names;
  for (const auto& v : lp.b) out.b.push_back(to_double(v));
  for (const auto& v : lp.c) out.c.push_back(to_double(v));
  out.columns.reserve(lp.columns.size());
  for (const auto& col : lp.columns) {
    SparseColumn<double> fc;
    fc.reserve(col.size());
    for (const auto& [r, v] : col) fc.emplace_back(r, to_double(v));
    out.columns.push_back(std::move(fc));
  }
  return out;
}

namespace {

double magnitude(double v) { return std::fabs(v); }
Rational magnitude(const Rational& v) { return abs(v); }

// Explicit dense inverse, updated by row operations. Exact arithmetic only.
class DenseInverse {
 public:
  void reset(std::size_t m) {
    m_ = m;
    inv_.assign(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i) inv_[i][i] = 1;
  }
  bool refactor(const std::vector<const SparseColumn<Rational>*>&) { return true; }

  std::vector<Rational> ftran(const SparseColumn<Rational>& a) const {
    std::vector<Rational> out(m_);
    for (std::size_t i = 0; i < m_; ++i)
      for (const auto& [r, v] : a)
        if (sgn(inv_[i][r]) != 0) out[i] += inv_[i][r] * v;
    return out;
  }

  std::vector<Rational> btran(const std::vector<Rational>& cb) const {
    std::vector<Rational> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (sgn(cb[i]) == 0) continue;
      for (std::size_t j = 0; j < m_; ++j)
        if (sgn(inv_[i][j]) != 0) y[j] += cb[i] * inv_[i][j];
    }
    return y;
  }

  void update(std::size_t r, const std::vector<Rational>& d) {
    auto& pivot_row = inv_[r];
    const Rational piv = d[r];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < m_; ++j) {
      if (sgn(pivot_row[j]) == 0) continue;
      pivot_row[j] /= piv;
      nz.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || sgn(d[i]) == 0) continue;
      for (std::size_t j : nz) inv_[i][j] -= d[i] * pivot_row[j];
    }
  }

  bool wants_refactor() const { return false; }

 private:
  std::size_t m_ = 0;
  std::vector<std::vector<Rational>> inv_;
};

// Sparse LU of the basis plus a product-form eta file.
class LUBasis {
 public:
  explicit LUBasis(std::size_t refactor_interval = 64) : interval_(refactor_interval) {}

  void reset(std::size_t m) {
    m_ = m;
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t i = 0; i < m; ++i) trip.emplace_back(int(i), int(i), 1.0);
    factor_triplets(trip);
  }

  bool refactor(const std::vector<const SparseColumn<double>*>& basis_cols) {
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t j = 0; j < basis_cols.size(); ++j)
      for (const auto& [r, v] : *basis_cols[j]) trip.emplace_back(int(r), int(j), v);
    return factor_triplets(trip);
  }

  std::vector<double> ftran(const SparseColumn<double>& a) const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(Eigen::Index(m_));
    for (const auto& [r, v] : a) rhs[Eigen::Index(r)] = v;
    Eigen::VectorXd x = lu_->solve(rhs);
    std::vector<double> out(x.data(), x.data() + m_);
    for (const auto& eta : etas_) {
      const double xr = out[eta.row] / eta.pivot;
      if (xr != 0)
        for (const auto& [i, di] : eta.entries) out[i] -= di * xr;
      out[eta.row] = xr;
    }
    return out;
  }

  std::vector<double> btran(const std::vector<double>& cb) const {
    std::vector<double> w = cb;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = w[it->row];
      for (const auto& [i, di] : it->entries) acc -= w[i] * di;
      w[it->row] = acc / it->pivot;
    }
    Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(w.data(), Eigen::Index(m_));
    Eigen::VectorXd y = lu_->transpose().solve(rhs);
    return std::vector<double>(y.data(), y.data() + m_);
  }

  void update(std::size_t r, const std::vector<double>& d) {
    Eta eta{r, d[r], {}};
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r && std::fabs(d[i]) > 1e-14) eta.entries.emplace_back(i, d[i]);
    etas_.push_back(std::move(eta));
  }

  bool wants_refactor() const { return etas_.size() >= interval_; }

 private:
  struct Eta {
    std::size_t row;
    double pivot;
    std::vector<std::pair<std::size_t, double>> entries;  // off-pivot entries of d
  };

  bool factor_triplets(const std::vector<Eigen::Triplet<double>>& trip) {
    Eigen::SparseMatrix<double> mat(static_cast<Eigen::Index>(m_), static_cast<Eigen::Index>(m_));
    mat.setFromTriplets(trip.begin(), trip.end());
    mat.makeCompressed();
    lu_ = std::make_unique<LU>();
    lu_->analyzePattern(mat);
    lu_->factorize(mat);
    etas_.clear();
    return lu_->info() == Eigen::Success;
  }

  std::size_t m_ = 0;
  std::size_t interval_;
  using LU = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;
  std::unique_ptr<LU> lu_;
  std::vector<Eta> etas_;
};

template <class T>
struct Tolerances {
  T feas{}, opt{}, piv{};
};

// Two-phase revised simplex on min c^T x, A x = b (b >= 0 after row flips), x >= 0.
// Artificials that remain basic in phase 2 are held at zero.
template <class T, class Basis>
class RevisedSimplex {
 public:
  RevisedSimplex(const StandardFormLP<T>& lp, const SolverOptions& opts, Tolerances<T> tol, Basis basis)
      : lp_(lp), opts_(opts), tol_(tol), factor_(std::move(basis)) {
    m_ = lp.rows;
    row_sign_.assign(m_, 1);
    for (std::size_t i = 0; i < m_; ++i)
      if (lp.b[i] < 0) row_sign_[i] = -1;
    b_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) b_[i] = row_sign_[i] < 0 ? T(-lp.b[i]) : lp.b[i];

    const bool maximize = lp.sense == Sense::Maximize;
    for (std::size_t j = 0; j < lp.cols(); ++j) {
      SparseColumn<T> col = lp.columns[j];
      for (auto& [r, v] : col)
        if (row_sign_[r] < 0) v = -v;
      T cost = maximize ? T(-lp.c[j]) : lp.c[j];
      add_internal(col, cost, j, 1);
      if (lp.bounds[j] == ColumnBound::Free) {
        for (auto& [r, v] : col) v = -v;
        add_internal(col, T(-cost), j, -1);
      }
    }
    nstruct_ = cols_.size();
    for (std::size_t i = 0; i < m_; ++i) cols_.push_back(SparseColumn<T>{{i, T(1)}});
  }

  LPSolution<T> solve() {
    LPSolution<T> sol;
    basis_.resize(m_);
    pos_.assign(cols_.size(), -1);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = nstruct_ + i;
      pos_[nstruct_ + i] = long(i);
    }
    xB_ = b_;
    factor_.reset(m_);

    LPStatus st = run_phase(1);
    if (st == LPStatus::Optimal) {
      T infeas{};
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= nstruct_) infeas += magnitude(xB_[i]);
      T scale = T(1);
      for (const auto& v : b_) scale = std::max(scale, v);
      if (infeas > tol_.feas * scale) st = LPStatus::Infeasible;
    }
    if (st == LPStatus::Optimal) st = run_phase(2);
    sol.status = st;
    sol.iterations = iterations_;
    extract(sol);
    return sol;
  }

 private:
  void add_internal(SparseColumn<T> col, T cost, std::size_t origin, int sign) {
    cols_.push_back(std::move(col));
    cost_.push_back(std::move(cost));
    origin_.push_back(origin);
    origin_sign_.push_back(sign);
  }

  bool artificial(std::size_t j) const { return j >= nstruct_; }

  T phase_cost(std::size_t j, int phase) const {
    if (phase == 1) return artificial(j) ? T(1) : T(0);
    return artificial(j) ? T(0) : cost_[j];
  }

  T reduced_cost(std::size_t j, const std::vector<T>& y, int phase) const {
    T r = phase_cost(j, phase);
    for (const auto& [row, v] : cols_[j]) r -= y[row] * v;
    return r;
  }

  std::optional<std::size_t> price(const std::vector<T>& y, int phase) {
    const T limit = T(-tol_.opt);
    if (bland_) {
      for (std::size_t j = 0; j < nstruct_; ++j)
        if (pos_[j] < 0 && reduced_cost(j, y, phase) < limit) return j;
      return std::nullopt;
    }
    // Partial Dantzig pricing over cyclic segments.
    const std::size_t segment = nstruct_ > 4000 ? std::max<std::size_t>(2000, nstruct_ / 8) : nstruct_;
    std::size_t scanned = 0;
    std::optional<std::size_t> best;
    T best_val{};
    while (scanned < nstruct_) {
      const std::size_t len = std::min(segment, nstruct_ - scanned);
      for (std::size_t k = 0; k < len; ++k) {
        const std::size_t j = (cursor_ + k) % nstruct_;
        if (pos_[j] >= 0) continue;
        T r = reduced_cost(j, y, phase);
        if (r < limit && (!best || r < best_val)) {
          best = j;
          best_val = r;
        }
      }
      cursor_ = (cursor_ + len) % nstruct_;
      scanned += len;
      if (best) break;
    }
    return best;
  }

  // Returns the leaving row, or nullopt when the direction is unbounded.
  std::optional<std::size_t> ratio_test(const std::vector<T>& d, int phase, T& theta) const {
    std::optional<std::size_t> leave;
    if constexpr (std::is_same_v<T, double>) {
      // Harris two-pass test.
      double bound = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const bool held = phase == 2 && artificial(basis_[i]);
        const double di = held ? std::fabs(d[i]) : d[i];
        if (di <= tol_.piv) continue;
        const double xi = held ? 0.0 : std::max(0.0, xB_[i]);
        bound = std::min(bound, (xi + tol_.feas) / di);
      }
      if (!std::isfinite(bound)) return std::nullopt;
      double best_piv = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        const bool held = phase == 2 && artificial(basis_[i]);
        const double di = held ? std::fabs(d[i]) : d[i];
        if (di <= tol_.piv) continue;
        const double xi = held ? 0.0 : std::max(0.0, xB_[i]);
        if (xi / di <= bound && di > best_piv) {
          best_piv = di;
          leave = i;
          theta = xi / di;
        }
      }
      return leave;
    } else {
      for (std::size_t i = 0; i < m_; ++i) {
        const bool held = phase == 2 && artificial(basis_[i]);
        if (held ? sgn(d[i]) == 0 : sgn(d[i]) <= 0) continue;
        Rational ratio = held ? Rational(0) : Rational(xB_[i] / d[i]);
        bool take = !leave;
        if (leave) {
          const int cmp = ::cmp(ratio, theta);
          if (cmp < 0)
            take = true;
          else if (cmp == 0)
            take = bland_ ? basis_[i] < basis_[*leave] : abs(d[i]) > abs(d[*leave]);
        }
        if (take) {
          leave = i;
          theta = ratio;
        }
      }
      return leave;
    }
  }

  bool refactor_now() {
    std::vector<const SparseColumn<T>*> bc(m_);
    for (std::size_t i = 0; i < m_; ++i) bc[i] = &cols_[basis_[i]];
    if (!factor_.refactor(bc)) return false;
    SparseColumn<T> rhs;
    for (std::size_t i = 0; i < m_; ++i)
      if (b_[i] != T(0)) rhs.emplace_back(i, b_[i]);
    xB_ = factor_.ftran(rhs);
    return true;
  }

  LPStatus run_phase(int phase) {
    bland_ = false;
    std::size_t streak = 0;
    while (true) {
      if (iterations_ >= opts_.max_iterations) return LPStatus::IterationLimit;
      if (opts_.deadline && iterations_ % 16 == 0 && std::chrono::steady_clock::now() > *opts_.deadline)
        return LPStatus::TimeLimit;
      if (factor_.wants_refactor() && !refactor_now()) return LPStatus::NumericalFailure;

      std::vector<T> cb(m_);
      for (std::size_t i = 0; i < m_; ++i) cb[i] = phase_cost(basis_[i], phase);
      const std::vector<T> y = factor_.btran(cb);

      auto entering = price(y, phase);
      if (!entering) return LPStatus::Optimal;
      const std::size_t q = *entering;
      std::vector<T> d = factor_.ftran(cols_[q]);

      T theta{};
      auto leaving = ratio_test(d, phase, theta);
      if (!leaving) {
        if (phase == 2) return LPStatus::Unbounded;
        return LPStatus::NumericalFailure;
      }
      const std::size_t r = *leaving;
      if constexpr (std::is_same_v<T, double>) {
        if (std::fabs(d[r]) < 1e-11) {
          if (!refactor_now()) return LPStatus::NumericalFailure;
          continue;
        }
      }

      if (theta != T(0))
        for (std::size_t i = 0; i < m_; ++i)
          if (d[i] != T(0)) xB_[i] -= theta * d[i];
      xB_[r] = theta;
      pos_[basis_[r]] = -1;
      basis_[r] = q;
      pos_[q] = long(r);
      factor_.update(r, d);
      ++iterations_;

      if constexpr (std::is_same_v<T, double>) {
        for (auto& v : xB_)
          if (v < 0 && v > -tol_.feas) v = 0;
      }
      const bool degenerate = magnitude(theta) <= tol_.feas;
      if (degenerate) {
        if (++streak > opts_.degenerate_streak) bland_ = true;
      } else {
        streak = 0;
        bland_ = false;
      }
    }
  }

  void extract(LPSolution<T>& sol) {
    sol.x.assign(lp_.cols(), T(0));
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = basis_[i];
      if (artificial(j)) continue;
      if (origin_sign_[j] > 0)
        sol.x[origin_[j]] += xB_[i];
      else
        sol.x[origin_[j]] -= xB_[i];
    }
    if constexpr (std::is_same_v<T, double>) {
      for (std::size_t j = 0; j < lp_.cols(); ++j)
        if (lp_.bounds[j] == ColumnBound::Nonnegative && sol.x[j] < 0) sol.x[j] = 0;
    }
    sol.objective = T(0);
    for (std::size_t j = 0; j < lp_.cols(); ++j)
      if (sol.x[j] != T(0)) sol.objective += lp_.c[j] * sol.x[j];

    std::vector<T> cb(m_);
    for (std::size_t i = 0; i < m_; ++i) cb[i] = phase_cost(basis_[i], 2);
    std::vector<T> y = factor_.btran(cb);
    const bool maximize = lp_.sense == Sense::Maximize;
    sol.duals.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      T v = row_sign_[i] < 0 ? T(-y[i]) : y[i];
      sol.duals[i] = maximize ? T(-v) : v;
    }
  }

  const StandardFormLP<T>& lp_;
  const SolverOptions& opts_;
  Tolerances<T> tol_;
  Basis factor_;

  std::size_t m_ = 0, nstruct_ = 0;
  std::vector<int> row_sign_;
  std::vector<T> b_;
  std::vector<SparseColumn<T>> cols_;
  std::vector<T> cost_;
  std::vector<std::size_t> origin_;
  std::vector<int> origin_sign_;

  std::vector<std::size_t> basis_;
  std::vector<long> pos_;
  std::vector<T> xB_;
  bool bland_ = false;
  std::size_t cursor_ = 0;
  std::size_t iterations_ = 0;
};

// Geometric-mean equilibration; returns row and column multipliers.
void equilibrate(FloatLP& lp, std::vector<double>& row_scale, std::vector<double>& col_scale) {
  row_scale.assign(lp.rows, 1.0);
  col_scale.assign(lp.cols(), 1.0);
  for (int pass = 0; pass < 4; ++pass) {
    std::vector<double> rmin(lp.rows, std::numeric_limits<double>::infinity()), rmax(lp.rows, 0.0);
    for (const auto& col : lp.columns)
      for (const auto& [r, v] : col) {
        const double a = std::fabs(v);
        if (a == 0) continue;
        rmin[r] = std::min(rmin[r], a);
        rmax[r] = std::max(rmax[r], a);
      }
    std::vector<double> rs(lp.rows, 1.0);
    for (std::size_t i = 0; i < lp.rows; ++i)
      if (rmax[i] > 0) rs[i] = 1.0 / std::sqrt(rmin[i] * rmax[i]);
    for (auto& col : lp.columns)
      for (auto& [r, v] : col) v *= rs[r];
    for (std::size_t i = 0; i < lp.rows; ++i) {
      lp.b[i] *= rs[i];
      row_scale[i] *= rs[i];
    }
    for (std::size_t j = 0; j < lp.cols(); ++j) {
      double cmin = std::numeric_limits<double>::infinity(), cmax = 0;
      for (const auto& [r, v] : lp.columns[j]) {
        const double a = std::fabs(v);
        if (a == 0) continue;
        cmin = std::min(cmin, a);
        cmax = std::max(cmax, a);
      }
      if (cmax == 0) continue;
      const double cs = 1.0 / std::sqrt(cmin * cmax);
      for (auto& [r, v] : lp.columns[j]) v *= cs;
      lp.c[j] *= cs;
      col_scale[j] *= cs;
    }
  }
}

}  // namespace

LPSolution<Rational> simplex_exact(const RationalLP& lp, const SolverOptions& opts) {
  lp.validate();
  if (lp.cols() > opts.exact_column_cap)
    throw ExactCapExceeded("exact simplex limited to " + std::to_string(opts.exact_column_cap) + " columns");
  RevisedSimplex<Rational, DenseInverse> solver(lp, opts, Tolerances<Rational>{}, DenseInverse{});
  LPSolution<Rational> sol = solver.solve();
  sol.infeasibility = primal_residual(lp, sol.x);
  return sol;
}

LPSolution<double> simplex_float(const FloatLP& lp, const SolverOptions& opts) {
  lp.validate();
  FloatLP work = lp;
  std::vector<double> row_scale(lp.rows, 1.0), col_scale(lp.cols(), 1.0);
  if (opts.scale) equilibrate(work, row_scale, col_scale);

  Tolerances<double> tol{opts.feasibility_tol, opts.optimality_tol, opts.pivot_tol};
  RevisedSimplex<double, LUBasis> solver(work, opts, tol, LUBasis(opts.refactor_interval));
  LPSolution<double> sol = solver.solve();
  for (std::size_t j = 0; j < lp.cols(); ++j) sol.x[j] *= col_scale[j];
  for (std::size_t i = 0; i < lp.rows; ++i) sol.duals[i] *= row_scale[i];
  sol.objective = 0;
  for (std::size_t j = 0; j < lp.cols(); ++j) sol.objective += lp.c[j] * sol.x[j];
  sol.infeasibility = primal_residual(lp, sol.x);
  return sol;
}

template <class T>
double primal_residual(const StandardFormLP<T>& lp, const std::vector<T>& x) {
  std::vector<T> ax(lp.rows, T(0));
  for (std::size_t j = 0; j < lp.cols() && j < x.size(); ++j) {
    if (x[j] == T(0)) continue;
    for (const auto& [r, v] : lp.columns[j]) ax[r] += v * x[j];
  }
  double worst = 0;
  for (std::size_t i = 0; i < lp.rows; ++i) {
    T diff = ax[i] - lp.b[i];
    double dv;
    if constexpr (std::is_same_v<T, double>)
      dv = std::fabs(diff);
    else
      dv = std::fabs(to_double(diff));
    worst = std::max(worst, dv);
  }
  return worst;
}

template double primal_residual(const StandardFormLP<Rational>&, const std::vector<Rational>&);
template double primal_residual(const StandardFormLP<double>&, const std::vector<double>&);

bool exactly_feasible(const RationalLP& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.cols()) return false;
  std::vector<Rational> ax(lp.rows);
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    if (lp.bounds[j] == ColumnBound::Nonnegative && x[j] < 0) return false;
    if (x[j] == 0) continue;
    for (const auto& [r, v] : lp.columns[j]) ax[r] += v * x[j];
  }
  for (std::size_t i = 0; i < lp.rows; ++i)
    if (ax[i] != lp.b[i]) return false;
  return true;
}

std::optional<Rational> dual_objective_bound(const RationalLP& lp, const std::vector<Rational>& y) {
  if (y.size() != lp.rows) return std::nullopt;
  const bool maximize = lp.sense == Sense::Maximize;
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    Rational red = lp.c[j];
    for (const auto& [r, v] : lp.columns[j]) red -= y[r] * v;
    if (lp.bounds[j] == ColumnBound::Free) {
      if (red != 0) return std::nullopt;
    } else if (maximize ? red > 0 : red < 0) {
      return std::nullopt;
    }
  }
  Rational obj = 0;
  for (std::size_t i = 0; i < lp.rows; ++i) obj += lp.b[i] * y[i];
  return obj;
}

Presolved presolve(const RationalLP& lp) {
  lp.validate();
  Presolved out;
  std::vector<bool> row_used(lp.rows, false);
  for (const auto& col : lp.columns)
    for (const auto& [r, v] : col)
      if (v != 0) row_used[r] = true;

  std::vector<long> row_map(lp.rows, -1);
  for (std::size_t i = 0; i < lp.rows; ++i) {
    if (row_used[i]) {
      row_map[i] = long(out.kept_rows.size());
      out.kept_rows.push_back(i);
    } else {
      ++out.removed_rows;
      if (lp.b[i] != 0) out.infeasible = true;
    }
  }

  out.lp.rows = out.kept_rows.size();
  out.lp.sense = lp.sense;
  for (std::size_t i : out.kept_rows) {
    out.lp.b.push_back(lp.b[i]);
    if (!lp.row_names.empty()) out.lp.row_names.push_back(lp.row_names[i]);
  }

  std::unordered_map<std::string, std::vector<std::size_t>> buckets;
  auto signature = [&](std::size_t j) {
    std::string key = lp.bounds[j] == ColumnBound::Free ? "F|" : "N|";
    key += lp.c[j].get_str() + "|";
    for (const auto& [r, v] : lp.columns[j]) key += std::to_string(r) + ":" + v.get_str() + ";";
    return key;
  };
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    auto& bucket = buckets[signature(j)];
    if (!bucket.empty()) {
      ++out.removed_columns;
      continue;
    }
    bucket.push_back(j);
    SparseColumn<Rational> col;
    for (const auto& [r, v] : lp.columns[j])
      if (v != 0) col.emplace_back(std::size_t(row_map[r]), v);
    out.lp.add_column(lp.column_names.empty() ? "c" + std::to_string(j) : lp.column_names[j], std::move(col), lp.c[j],
                      lp.bounds[j]);
    out.kept_columns.push_back(j);
  }
  return out;
}

template <class T>
std::vector<T> Presolved::expand_primal(const std::vector<T>& x, std::size_t original_cols) const {
  std::vector<T> full(original_cols, T(0));
  for (std::size_t k = 0; k < kept_columns.size() && k < x.size(); ++k) full[kept_columns[k]] = x[k];
  return full;
}

template <class T>
std::vector<T> Presolved::expand_duals(const std::vector<T>& y, std::size_t original_rows) const {
  std::vector<T> full(original_rows, T(0));
  for (std::size_t k = 0; k < kept_rows.size() && k < y.size(); ++k) full[kept_rows[k]] = y[k];
  return full;
}

template std::vector<Rational> Presolved::expand_primal(const std::vector<Rational>&, std::size_t) const;
template std::vector<double> Presolved::expand_primal(const std::vector<double>&, std::size_t) const;
template std::vector<Rational> Presolved::expand_duals(const std::vector<Rational>&, std::size_t) const;
template std::vector<double> Presolved::expand_duals(const std::vector<double>&, std::size_t) const;

}  // namespace fpcert
