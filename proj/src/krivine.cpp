#include "fpcert/krivine.hpp"

#include <future>
#include <map>
#include <random>
#include <sstream>

namespace fpcert {

SparsityPattern SparsityPattern::for_error_problem(std::size_t n, std::size_t m) {
  SparsityPattern p;
  p.n = n;
  p.m = m;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::size_t> block;
    for (std::size_t i = 0; i < n; ++i) block.push_back(i);
    block.push_back(n + j);
    p.blocks.push_back(std::move(block));
  }
  return p;
}

bool SparsityPattern::covers_all_variables() const {
  std::vector<bool> seen(n + m, false);
  for (const auto& b : blocks)
    for (std::size_t v : b)
      if (v < seen.size()) seen[v] = true;
  for (bool s : seen)
    if (!s) return false;
  return true;
}

bool SparsityPattern::running_intersection() const {
  std::vector<bool> seen(n + m, false);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (j > 0) {
      // The overlap with earlier blocks must sit inside a single earlier block.
      std::vector<std::size_t> overlap;
      for (std::size_t v : blocks[j])
        if (seen[v]) overlap.push_back(v);
      bool contained = false;
      for (std::size_t i = 0; i < j && !contained; ++i) {
        contained = true;
        for (std::size_t v : overlap)
          if (std::find(blocks[i].begin(), blocks[i].end(), v) == blocks[i].end()) contained = false;
      }
      if (!contained) return false;
    }
    for (std::size_t v : blocks[j]) seen[v] = true;
  }
  return true;
}

unsigned HandelmanIndex::degree() const {
  unsigned d = e_plus + e_minus;
  for (unsigned a : lower) d += a;
  for (unsigned b : upper) d += b;
  return d;
}

namespace {

// Compositions of `total` into `parts` nonnegative parts, lexicographically descending.
void compositions(std::size_t parts, unsigned total, std::vector<unsigned>& cur,
                  std::vector<std::vector<unsigned>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (unsigned v = total + 1; v-- > 0;) {
    cur.push_back(v);
    compositions(parts, total - v, cur, out);
    cur.pop_back();
  }
}

Rational power(const Rational& v, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= v;
  return r;
}

// Terms of each product keyed by a local monomial id, plus the local monomial list.
struct LocalSupport {
  std::vector<Monomial> monomials;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> product_terms;
};

LocalSupport local_support(const std::vector<HandelmanProduct>& products) {
  LocalSupport ls;
  std::map<Monomial, std::size_t, GrlexLess> ids;
  for (const auto& p : products) {
    std::vector<std::pair<std::size_t, Rational>> terms;
    for (const auto& [mono, c] : p.poly.terms()) {
      auto [it, inserted] = ids.try_emplace(mono, ls.monomials.size());
      if (inserted) ls.monomials.push_back(mono);
      terms.emplace_back(it->second, c);
    }
    ls.product_terms.push_back(std::move(terms));
  }
  return ls;
}

Monomial embed_local(const Monomial& local, std::size_t n, std::size_t m, std::size_t block) {
  Monomial g(n + m);
  for (std::size_t i = 0; i < n; ++i)
    if (local[i]) g.set(i, local[i]);
  if (local[n]) g.set(n + block, local[n]);
  return g;
}

struct RowIndex {
  std::map<Monomial, std::size_t, GrlexLess> index;
  std::vector<std::vector<std::size_t>> block_rows;  // [block][local id] -> row
};

RowIndex row_index(const KSRelaxation& lp, const LocalSupport& ls) {
  RowIndex ri;
  for (std::size_t r = 0; r < lp.rows.size(); ++r) ri.index.emplace(lp.rows[r], r);
  ri.block_rows.resize(lp.m);
  for (std::size_t j = 0; j < lp.m; ++j)
    for (const auto& mono : ls.monomials) ri.block_rows[j].push_back(ri.index.at(embed_local(mono, lp.n, lp.m, j)));
  return ri;
}

std::string join(const std::vector<unsigned>& v, unsigned tail) {
  std::ostringstream out;
  for (unsigned a : v) out << a << '.';
  out << tail;
  return out.str();
}

Polynomial from_accumulator(std::size_t nvars, const std::map<Monomial, Rational, GrlexLess>& acc) {
  Polynomial p(nvars);
  for (const auto& [mono, c] : acc) p.add_term(mono, c);
  return p;
}

}  // namespace

std::vector<HandelmanProduct> gen_handelman_products(std::size_t n, unsigned k) {
  const std::size_t nloc = n + 1;
  const Rational half(1, 2);
  std::vector<std::vector<Polynomial>> xp(n), xq(n);
  std::vector<Polynomial> ep, eq;
  for (std::size_t i = 0; i < n; ++i) {
    const Polynomial x = Polynomial::variable(nloc, i);
    const Polynomial one_minus = Polynomial::constant(nloc, Rational(1)) - x;
    xp[i].push_back(Polynomial::constant(nloc, Rational(1)));
    xq[i].push_back(Polynomial::constant(nloc, Rational(1)));
    for (unsigned a = 1; a <= k; ++a) {
      xp[i].push_back(xp[i].back() * x);
      xq[i].push_back(xq[i].back() * one_minus);
    }
  }
  {
    Polynomial e = Polynomial::variable(nloc, n);
    e *= half;
    const Polynomial plus = Polynomial::constant(nloc, half) + e;
    const Polynomial minus = Polynomial::constant(nloc, half) - e;
    ep.push_back(Polynomial::constant(nloc, Rational(1)));
    eq.push_back(Polynomial::constant(nloc, Rational(1)));
    for (unsigned a = 1; a <= k; ++a) {
      ep.push_back(ep.back() * plus);
      eq.push_back(eq.back() * minus);
    }
  }

  std::vector<HandelmanProduct> out;
  const std::size_t parts = 2 * n + 2;
  for (unsigned d = 0; d <= k; ++d) {
    std::vector<std::vector<unsigned>> comps;
    std::vector<unsigned> cur;
    compositions(parts, d, cur, comps);
    for (const auto& v : comps) {
      HandelmanIndex idx;
      idx.lower.assign(v.begin(), v.begin() + long(n));
      idx.upper.assign(v.begin() + long(n), v.begin() + long(2 * n));
      idx.e_plus = v[2 * n];
      idx.e_minus = v[2 * n + 1];
      Polynomial p = ep[idx.e_plus] * eq[idx.e_minus];
      for (std::size_t i = 0; i < n; ++i) {
        if (idx.lower[i]) p = p * xp[i][idx.lower[i]];
        if (idx.upper[i]) p = p * xq[i][idx.upper[i]];
      }
      out.push_back({std::move(idx), std::move(p)});
    }
  }
  return out;
}

Rational evaluate_product(const HandelmanIndex& idx, const std::vector<Rational>& point) {
  const std::size_t n = idx.lower.size();
  if (point.size() != n + 1) throw std::invalid_argument("evaluate_product: point has wrong dimension");
  Rational v = 1;
  for (std::size_t i = 0; i < n; ++i) {
    v *= power(point[i], idx.lower[i]);
    v *= power(Rational(1 - point[i]), idx.upper[i]);
  }
  const Rational half(1, 2);
  v *= power(Rational(half + point[n] / 2), idx.e_plus);
  v *= power(Rational(half - point[n] / 2), idx.e_minus);
  return v;
}

std::string KSRelaxation::column_name(std::size_t col) const {
  if (col == columns.size()) return "t";
  const auto& c = columns.at(col);
  const auto& idx = products[c.product].index;
  return "l_" + std::to_string(c.block + 1) + "_a" + join(idx.lower, idx.e_plus) + "_b" + join(idx.upper, idx.e_minus);
}

Polynomial KSRelaxation::column_polynomial(std::size_t col) const {
  const std::size_t total = n + m;
  if (col == columns.size()) return Polynomial::constant(total, Rational(1));
  const auto& c = columns.at(col);
  std::vector<std::size_t> mapping(n + 1);
  for (std::size_t i = 0; i < n; ++i) mapping[i] = i;
  mapping[n] = n + c.block;
  return products[c.product].poly.embed(total, mapping);
}

RationalLP KSRelaxation::to_standard_form() const {
  const LocalSupport ls = local_support(products);
  const RowIndex ri = row_index(*this, ls);

  RationalLP lp;
  lp.rows = rows.size();
  lp.sense = direction == Direction::Lower ? Sense::Maximize : Sense::Minimize;
  lp.b.assign(lp.rows, Rational(0));
  for (const auto& [mono, c] : target.terms()) lp.b[ri.index.at(mono)] = direction == Direction::Lower ? c : Rational(-c);
  for (const auto& mono : rows) {
    std::string name = "m";
    for (std::size_t i = 0; i < mono.nvars(); ++i) name += (i ? "." : "") + std::to_string(mono[i]);
    lp.row_names.push_back(std::move(name));
  }

  lp.columns.reserve(column_count());
  for (std::size_t col = 0; col < columns.size(); ++col) {
    const auto& c = columns[col];
    SparseColumn<Rational> entries;
    for (const auto& [lid, coef] : ls.product_terms[c.product]) entries.emplace_back(ri.block_rows[c.block][lid], coef);
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    lp.add_column(column_name(col), std::move(entries), Rational(0));
  }
  const std::size_t const_row = ri.index.at(Monomial(n + m));
  lp.add_column("t", {{const_row, direction == Direction::Lower ? Rational(1) : Rational(-1)}}, Rational(1),
                ColumnBound::Free);
  return lp;
}

Polynomial scaled_linear_part(const std::vector<Polynomial>& s, std::size_t n) {
  const std::size_t m = s.size();
  Polynomial l(n + m);
  for (std::size_t j = 0; j < m; ++j) {
    if (s[j].nvars() != n) throw std::invalid_argument("coefficient polynomial has wrong variable count");
    for (const auto& [mono, c] : s[j].terms()) {
      Monomial g(n + m);
      for (std::size_t i = 0; i < n; ++i)
        if (mono[i]) g.set(i, mono[i]);
      g.set(n + j, 1);
      l.add_term(g, c);
    }
  }
  return l;
}

unsigned linear_part_degree(const std::vector<Polynomial>& s) {
  unsigned d = 0;
  for (const auto& p : s)
    if (!p.is_zero()) d = std::max(d, p.total_degree() + 1);
  return d;
}

KSRelaxation build_lp(const std::vector<Polynomial>& s, std::size_t n, unsigned order, Direction direction) {
  const unsigned deg = linear_part_degree(s);
  if (order < deg)
    throw std::invalid_argument("relaxation order " + std::to_string(order) + " is below the degree " +
                                std::to_string(deg) + " of the linear part");
  KSRelaxation lp;
  lp.n = n;
  lp.m = s.size();
  lp.order = order;
  lp.direction = direction;
  lp.target = scaled_linear_part(s, n);
  lp.products = gen_handelman_products(n, order);

  const LocalSupport ls = local_support(lp.products);
  std::map<Monomial, std::size_t, GrlexLess> rows;
  for (std::size_t j = 0; j < lp.m; ++j)
    for (const auto& mono : ls.monomials) rows.emplace(embed_local(mono, n, lp.m, j), 0);
  for (const auto& [mono, c] : lp.target.terms()) rows.emplace(mono, 0);
  rows.emplace(Monomial(n + lp.m), 0);
  for (const auto& [mono, unused] : rows) lp.rows.push_back(mono);

  for (std::size_t j = 0; j < lp.m; ++j)
    for (std::size_t p = 0; p < lp.products.size(); ++p) lp.columns.push_back({j, p});
  return lp;
}

LPSize nominal_size(std::size_t n, std::size_t m, unsigned order) {
  if (m == 0) return {Integer(1), Integer(1)};
  const Integer per_block = binomial(unsigned(2 * (n + 1) + order), order);
  const Integer rows = Integer(unsigned(m)) * binomial(unsigned(n + 1 + order), order) -
                       Integer(unsigned(m - 1)) * binomial(unsigned(n + order), order);
  return {Integer(unsigned(m)) * per_block + 1, rows};
}

LPSize dense_size(std::size_t n, std::size_t m, unsigned order) {
  return {binomial(unsigned(2 * (n + m) + order), order) + 1, binomial(unsigned(n + m + order), order)};
}

Certificate certify(const KSRelaxation& lp, const Rational& t, std::vector<Rational> lambda) {
  if (lambda.size() != lp.columns.size()) throw std::invalid_argument("certify: weight count mismatch");
  const std::size_t total = lp.n + lp.m;
  const LocalSupport ls = local_support(lp.products);

  // delta = (l' - t) - sum lambda h for the lower direction, (t - l') - sum lambda h for the upper one.
  std::map<Monomial, Rational, GrlexLess> acc;
  const bool lower = lp.direction == Direction::Lower;
  for (const auto& [mono, c] : lp.target.terms()) acc[mono] += lower ? c : Rational(-c);
  acc[Monomial(total)] += lower ? Rational(-t) : t;

  std::vector<std::map<std::size_t, Monomial>> embedded(lp.m);
  for (std::size_t col = 0; col < lp.columns.size(); ++col) {
    Rational& w = lambda[col];
    if (w <= 0) continue;
    const auto& c = lp.columns[col];
    for (const auto& [lid, coef] : ls.product_terms[c.product]) {
      auto it = embedded[c.block].find(lid);
      if (it == embedded[c.block].end())
        it = embedded[c.block].emplace(lid, embed_local(ls.monomials[lid], lp.n, lp.m, c.block)).first;
      acc[it->second] -= w * coef;
    }
  }
  const Polynomial delta = from_accumulator(total, acc);

  std::vector<Interval> domain(lp.n, Interval(Rational(0), Rational(1)));
  for (std::size_t j = 0; j < lp.m; ++j) domain.push_back(Interval(Rational(-1), Rational(1)));
  Certificate cert;
  cert.direction = lp.direction;
  cert.t = t;
  cert.residual_range = interval_eval(delta, domain);
  // lower: l' = t + sum lambda h + delta >= t + lo(delta)
  // upper: l' = t - sum lambda h - delta <= t - lo(delta)
  cert.certified = lower ? Rational(t + cert.residual_range.lo) : Rational(t - cert.residual_range.lo);
  return cert;
}

std::vector<Polynomial> block_certificates(const KSRelaxation& lp, const std::vector<Rational>& lambda) {
  const std::size_t total = lp.n + lp.m;
  std::vector<Polynomial> out(lp.m, Polynomial(total));
  for (std::size_t col = 0; col < lp.columns.size() && col < lambda.size(); ++col) {
    if (lambda[col] <= 0) continue;
    Polynomial h = lp.column_polynomial(col);
    h *= lambda[col];
    out[lp.columns[col].block] += h;
  }
  return out;
}

namespace {

bool better(Direction d, const Rational& candidate, const Rational& current) {
  return d == Direction::Lower ? candidate > current : candidate < current;
}

}  // namespace

DirectionResult solve_and_certify(const KSRelaxation& lp, const KrivineOptions& opts) {
  DirectionResult res;
  res.direction = lp.direction;
  const RationalLP full = lp.to_standard_form();
  const Presolved pre = presolve(full);
  const std::size_t tcol = full.cols() - 1;

  bool exact = opts.mode == LPMode::Exact;
  if (opts.mode == LPMode::Auto)
    exact = pre.lp.cols() <= opts.exact_auto_columns && pre.lp.rows <= opts.exact_auto_rows;
  res.exact = exact;
  res.presolved_columns = pre.lp.cols();
  res.presolved_rows = pre.lp.rows;

  Rational t = 0;
  std::vector<Rational> lambda(lp.columns.size());
  if (pre.infeasible) {
    res.status = LPStatus::Infeasible;
  } else if (exact) {
    const auto sol = simplex_exact(pre.lp, opts.solver);
    res.status = sol.status;
    res.iterations = sol.iterations;
    const auto x = pre.expand_primal(sol.x, full.cols());
    t = x[tcol];
    for (std::size_t j = 0; j < lambda.size(); ++j) lambda[j] = x[j];
  } else {
    const auto sol = simplex_float(to_float(pre.lp), opts.solver);
    res.status = sol.status;
    res.iterations = sol.iterations;
    auto x = pre.expand_primal(sol.x, full.cols());
    if (opts.lambda_noise > 0) {
      std::mt19937_64 rng(opts.noise_seed);
      std::uniform_real_distribution<double> noise(-opts.lambda_noise, opts.lambda_noise);
      for (std::size_t j = 0; j < lambda.size(); ++j) x[j] += noise(rng);
    }
    t = truncate_dyadic(x[tcol], opts.dyadic_bits);
    for (std::size_t j = 0; j < lambda.size(); ++j)
      lambda[j] = x[j] > 0 ? truncate_dyadic(x[j], opts.dyadic_bits) : Rational(0);
  }
  res.raw_objective = t;
  res.certificate = certify(lp, t, lambda);

  // The empty certificate is always valid; keep it if the solver output certifies worse.
  const Certificate trivial = certify(lp, Rational(0), std::vector<Rational>(lp.columns.size()));
  if (better(lp.direction, trivial.certified, res.certificate.certified)) res.certificate = trivial;
  return res;
}

KrivineResult krivine_bound(const std::vector<Polynomial>& s, std::size_t n, const KrivineOptions& opts) {
  KrivineResult out;
  out.order = opts.order ? *opts.order : linear_part_degree(s) + opts.order_increment;
  const KSRelaxation lower = build_lp(s, n, out.order, Direction::Lower);
  const KSRelaxation upper = build_lp(s, n, out.order, Direction::Upper);
  out.columns = lower.column_count();
  out.rows = lower.row_count();
  out.dense = dense_size(n, s.size(), out.order);

  auto lower_job = std::async(std::launch::async, [&] { return solve_and_certify(lower, opts); });
  out.upper = solve_and_certify(upper, opts);
  out.lower = lower_job.get();

  out.presolved_columns = out.lower.presolved_columns;
  out.presolved_rows = out.lower.presolved_rows;
  out.exact = out.lower.exact && out.upper.exact;
  out.bound = max(abs(out.lower.certificate.certified), abs(out.upper.certificate.certified));
  return out;
}

}  // namespace fpcert
