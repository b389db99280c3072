#include "fpcert/rounding.hpp"

#include <map>
#include <unordered_map>

namespace fpcert {

RoundingConfig RoundingConfig::for_precision(Precision p) {
  RoundingConfig cfg;
  const unsigned bits = p == Precision::Binary64 ? 53 : 24;
  cfg.significand_bits = static_cast<int>(bits);
  cfg.precision_name = p == Precision::Binary64 ? "binary64" : "binary32";
  Integer den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
  cfg.epsilon = Rational(Integer(1), den);
  return cfg;
}

RoundingConfig RoundingConfig::with_conventions(const ProgramSpec& spec) const {
  RoundingConfig cfg = *this;
  if (spec.conventions.count("share-subexpressions")) cfg.share_subexpressions = true;
  if (spec.conventions.count("free-negation")) cfg.free_negation = true;
  if (spec.conventions.count("all-constants")) cfg.tag_exact_constants = false;
  return cfg;
}

namespace {

using Op = InstrumentedGraph::Op;

class GraphBuilder {
 public:
  GraphBuilder(const ProgramSpec& spec, const RoundingConfig& cfg) : spec_(spec), cfg_(cfg) {
    graph_.n = spec.n();
    graph_.box = spec.box();
    var_error_.assign(spec.n(), std::nullopt);
  }

  InstrumentedGraph run() {
    visit(spec_.body);
    graph_.m = graph_.provenance.size();
    return std::move(graph_);
  }

 private:
  std::size_t fresh(ErrorSource::Kind kind, std::string label) {
    graph_.provenance.push_back({kind, std::move(label)});
    return graph_.provenance.size() - 1;
  }

  std::size_t emit(InstrumentedGraph::Node node, const std::string& key) {
    if (cfg_.share_subexpressions) {
      if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
    }
    switch (node.op) {
      case Op::Variable:
        if (!var_error_[node.input]) var_error_[node.input] = fresh(ErrorSource::Kind::Variable, spec_.inputs[node.input].name);
        node.error = var_error_[node.input];
        break;
      case Op::Constant:
        if (!(cfg_.tag_exact_constants && is_representable(node.value, cfg_.significand_bits)))
          node.error = fresh(ErrorSource::Kind::Constant, to_string(node.value));
        break;
      case Op::Neg:
        if (!cfg_.free_negation) node.error = fresh(ErrorSource::Kind::Operation, "neg");
        break;
      case Op::Add: node.error = fresh(ErrorSource::Kind::Operation, "add"); break;
      case Op::Sub: node.error = fresh(ErrorSource::Kind::Operation, "sub"); break;
      case Op::Mul: node.error = fresh(ErrorSource::Kind::Operation, "mul"); break;
    }
    graph_.nodes.push_back(std::move(node));
    const std::size_t id = graph_.nodes.size() - 1;
    if (cfg_.share_subexpressions) by_key_.emplace(key, id);
    return id;
  }

  std::size_t visit(const ExprPtr& e) {
    if (auto it = by_ptr_.find(e.get()); it != by_ptr_.end()) return it->second;
    InstrumentedGraph::Node node{};
    std::string key;
    auto binary = [&](Op op, const ExprPtr& l, const ExprPtr& r, char tag) {
      node.op = op;
      node.left = visit(l);
      node.right = visit(r);
      key = std::string(1, tag) + std::to_string(node.left) + "," + std::to_string(node.right);
    };
    if (auto* c = std::get_if<Constant>(&e->node)) {
      node.op = Op::Constant;
      node.value = c->value;
      key = "c" + to_string(c->value);
    } else if (auto* v = std::get_if<Variable>(&e->node)) {
      if (v->index >= spec_.n()) throw std::out_of_range("variable index exceeds input count");
      node.op = Op::Variable;
      node.input = v->index;
      key = "v" + std::to_string(v->index);
    } else if (auto* n = std::get_if<Neg>(&e->node)) {
      node.op = Op::Neg;
      node.left = visit(n->child);
      key = "n" + std::to_string(node.left);
    } else if (auto* a = std::get_if<Add>(&e->node)) {
      binary(Op::Add, a->left, a->right, '+');
    } else if (auto* s = std::get_if<Sub>(&e->node)) {
      binary(Op::Sub, s->left, s->right, '-');
    } else if (auto* m = std::get_if<Mul>(&e->node)) {
      binary(Op::Mul, m->left, m->right, '*');
    }
    const std::size_t id = emit(std::move(node), key);
    by_ptr_.emplace(e.get(), id);
    return id;
  }

  const ProgramSpec& spec_;
  const RoundingConfig& cfg_;
  InstrumentedGraph graph_;
  std::vector<std::optional<std::size_t>> var_error_;
  std::unordered_map<const Expr*, std::size_t> by_ptr_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

// p * (1 + e_j)
Polynomial times_one_plus(const Polynomial& p, std::size_t var) {
  Polynomial r = p;
  for (const auto& [mono, c] : p.terms()) {
    Monomial shifted = mono;
    shifted.set(var, mono[var] + 1);
    r.add_term(shifted, c);
  }
  return r;
}

}  // namespace

InstrumentedGraph build_instrumented_graph(const ProgramSpec& spec, const RoundingConfig& cfg) {
  if (!spec.body) throw std::invalid_argument("program has no body");
  return GraphBuilder(spec, cfg).run();
}

Instrumented instrument(const InstrumentedGraph& g, std::size_t term_cap) {
  const std::size_t total = g.n + g.m;
  std::vector<Polynomial> hat;
  std::vector<Polynomial> plain;
  hat.reserve(g.nodes.size());
  plain.reserve(g.nodes.size());
  for (const auto& node : g.nodes) {
    Polynomial h(total), p(g.n);
    switch (node.op) {
      case Op::Constant:
        h = Polynomial::constant(total, node.value);
        p = Polynomial::constant(g.n, node.value);
        break;
      case Op::Variable:
        h = Polynomial::variable(total, node.input);
        p = Polynomial::variable(g.n, node.input);
        break;
      case Op::Neg:
        h = -hat[node.left];
        p = -plain[node.left];
        break;
      case Op::Add:
        h = hat[node.left] + hat[node.right];
        p = plain[node.left] + plain[node.right];
        break;
      case Op::Sub:
        h = hat[node.left] - hat[node.right];
        p = plain[node.left] - plain[node.right];
        break;
      case Op::Mul:
        h = hat[node.left] * hat[node.right];
        p = plain[node.left] * plain[node.right];
        break;
    }
    if (node.error) h = times_one_plus(h, g.n + *node.error);
    if (term_cap != 0 && h.size() > term_cap)
      throw ExpansionLimit("expansion of fhat exceeds " + std::to_string(term_cap) + " terms");
    hat.push_back(std::move(h));
    plain.push_back(std::move(p));
  }
  return Instrumented{std::move(hat.back()), std::move(plain.back()), g.m, g.provenance};
}

Instrumented instrument(const ProgramSpec& spec, const RoundingConfig& cfg, std::size_t term_cap) {
  return instrument(build_instrumented_graph(spec, cfg), term_cap);
}

std::vector<AffineMap> unit_box_maps(std::span<const Interval> box) {
  std::vector<AffineMap> maps;
  for (const auto& iv : box) maps.push_back({iv.lo, iv.hi - iv.lo});
  return maps;
}

ErrorDecomposition decompose(const Polynomial& fhat, const Polynomial& f, std::span<const Interval> box,
                             const Rational& epsilon, std::vector<ErrorSource> provenance) {
  const std::size_t n = f.nvars();
  if (fhat.nvars() < n || box.size() != n) throw std::invalid_argument("decompose: dimension mismatch");
  const std::size_t m = fhat.nvars() - n;

  std::vector<std::size_t> mapping(n);
  for (std::size_t i = 0; i < n; ++i) mapping[i] = i;
  Polynomial r = fhat - f.embed(fhat.nvars(), mapping);

  DegreeSplit split;
  try {
    split = partial_degree_split(r, n);
  } catch (const SplitError& e) {
    throw ConsistencyError(std::string("fhat - f does not vanish at e = 0: ") + e.what());
  }

  ErrorDecomposition dec;
  dec.n = n;
  dec.m = m;
  dec.epsilon = epsilon;
  dec.provenance = std::move(provenance);
  dec.unit_maps = unit_box_maps(box);
  dec.f_degree = f.total_degree();
  dec.f_multidegree = f.multidegree();
  for (auto& s : split.linear) dec.s.push_back(affine_substitute(s, dec.unit_maps));

  std::vector<AffineMap> full_maps = dec.unit_maps;
  for (std::size_t j = 0; j < m; ++j) full_maps.push_back({Rational(0), Rational(1)});
  Polynomial h = affine_substitute(split.remainder, full_maps);
  std::vector<Interval> domain(n, Interval(Rational(0), Rational(1)));
  for (std::size_t j = 0; j < m; ++j) domain.push_back(Interval::symmetric(epsilon));
  dec.h_bound = interval_eval(h, domain);
  dec.exact_remainder = true;
  return dec;
}

namespace {

// First-order form: v(x) + sum_j s_j(x) e_j + R, R an interval enclosing the rest.
struct FirstOrder {
  Polynomial v;
  std::map<std::size_t, Polynomial> lin;
  Interval rem{Rational(0)};
};

}  // namespace

ErrorDecomposition linearize(const InstrumentedGraph& g, const RoundingConfig& cfg) {
  const Interval E = Interval::symmetric(cfg.epsilon);
  std::vector<FirstOrder> forms;
  forms.reserve(g.nodes.size());
  auto value_range = [&](const Polynomial& p) { return interval_eval(p, g.box); };
  auto linear_range = [&](const FirstOrder& fo) {
    Interval sum(Rational(0));
    for (const auto& [j, s] : fo.lin) sum = sum + value_range(s) * E;
    return sum;
  };
  auto combine = [](const FirstOrder& a, const FirstOrder& b, bool subtract) {
    FirstOrder out;
    out.v = subtract ? a.v - b.v : a.v + b.v;
    out.lin = a.lin;
    for (const auto& [j, s] : b.lin) {
      auto [it, inserted] = out.lin.try_emplace(j, Polynomial(a.v.nvars()));
      if (subtract)
        it->second -= s;
      else
        it->second += s;
    }
    out.rem = subtract ? a.rem - b.rem : a.rem + b.rem;
    return out;
  };

  Polynomial f(g.n);
  for (const auto& node : g.nodes) {
    FirstOrder fo;
    switch (node.op) {
      case Op::Constant: fo.v = Polynomial::constant(g.n, node.value); break;
      case Op::Variable: fo.v = Polynomial::variable(g.n, node.input); break;
      case Op::Neg: {
        const auto& c = forms[node.left];
        fo.v = -c.v;
        for (const auto& [j, s] : c.lin) fo.lin.emplace(j, -s);
        fo.rem = -c.rem;
        break;
      }
      case Op::Add: fo = combine(forms[node.left], forms[node.right], false); break;
      case Op::Sub: fo = combine(forms[node.left], forms[node.right], true); break;
      case Op::Mul: {
        const auto& a = forms[node.left];
        const auto& b = forms[node.right];
        fo.v = a.v * b.v;
        for (const auto& [j, s] : b.lin) fo.lin.try_emplace(j, Polynomial(g.n)).first->second += a.v * s;
        for (const auto& [j, s] : a.lin) fo.lin.try_emplace(j, Polynomial(g.n)).first->second += b.v * s;
        const Interval va = value_range(a.v), vb = value_range(b.v);
        const Interval la = linear_range(a), lb = linear_range(b);
        fo.rem = la * lb + va * b.rem + vb * a.rem + la * b.rem + lb * a.rem + a.rem * b.rem;
        break;
      }
    }
    if (node.error) {
      const Interval tail = linear_range(fo) + fo.rem;
      fo.lin.try_emplace(*node.error, Polynomial(g.n)).first->second += fo.v;
      fo.rem = fo.rem + tail * E;
    }
    for (auto it = fo.lin.begin(); it != fo.lin.end();) it = it->second.is_zero() ? fo.lin.erase(it) : std::next(it);
    forms.push_back(std::move(fo));
  }

  const FirstOrder& root = forms.back();
  ErrorDecomposition dec;
  dec.n = g.n;
  dec.m = g.m;
  dec.epsilon = cfg.epsilon;
  dec.provenance = g.provenance;
  dec.unit_maps = unit_box_maps(g.box);
  dec.f_degree = root.v.total_degree();
  dec.f_multidegree = root.v.multidegree();
  for (std::size_t j = 0; j < g.m; ++j) {
    auto it = root.lin.find(j);
    dec.s.push_back(it == root.lin.end() ? Polynomial(g.n) : affine_substitute(it->second, dec.unit_maps));
  }
  dec.h_bound = hull(root.rem, Interval(Rational(0)));
  dec.exact_remainder = false;
  return dec;
}

ErrorDecomposition analyze(const ProgramSpec& spec, const RoundingConfig& cfg, std::size_t term_cap) {
  const InstrumentedGraph graph = build_instrumented_graph(spec, cfg);
  try {
    Instrumented inst = instrument(graph, term_cap);
    return decompose(inst.fhat, inst.f, graph.box, cfg.epsilon, inst.provenance);
  } catch (const ExpansionLimit&) {
    return linearize(graph, cfg);
  }
}

ScaledProblem scaled_linear_bound_inputs(const ErrorDecomposition& dec) { return {dec.s, dec.n, dec.m}; }

Rational absolute_bound(const ErrorDecomposition& dec, const Rational& scaled_l_bound) {
  return dec.epsilon * scaled_l_bound + dec.h_bound.magnitude();
}

}  // namespace fpcert
