#pragma once

#include "fpcert/expr.hpp"
#include "fpcert/polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fpcert {

enum class Precision { Binary32, Binary64 };

struct RoundingConfig {
  Rational epsilon;        // 2^-53 for binary64, 2^-24 for binary32
  int significand_bits = 53;
  std::string precision_name = "binary64";
  bool tag_exact_constants = true;  // exactly representable constants get no error variable
  bool free_negation = false;       // negation is exact when set
  bool share_subexpressions = false;

  static RoundingConfig for_precision(Precision p);
  // Applies `# convention:` tokens recorded on a program.
  RoundingConfig with_conventions(const ProgramSpec& spec) const;
};

struct ErrorSource {
  enum class Kind { Variable, Constant, Operation };
  Kind kind;
  std::string label;  // variable name, constant text, or operator name
};

// The program as a computation DAG in post-order, with error variables attached.
struct InstrumentedGraph {
  enum class Op { Constant, Variable, Neg, Add, Sub, Mul };
  struct Node {
    Op op;
    Rational value;          // Constant
    std::size_t input = 0;   // Variable
    std::size_t left = 0;    // child node ids (post-order indices)
    std::size_t right = 0;
    std::optional<std::size_t> error;  // index j of e_j, 0-based
  };

  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Node> nodes;  // children precede parents; root is last
  std::vector<ErrorSource> provenance;
  std::vector<Interval> box;
};

InstrumentedGraph build_instrumented_graph(const ProgramSpec& spec, const RoundingConfig& cfg);

struct Instrumented {
  Polynomial fhat;  // over (x_1..x_n, e_1..e_m)
  Polynomial f;     // over x_1..x_n
  std::size_t m = 0;
  std::vector<ErrorSource> provenance;
};

struct ExpansionLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full exact expansion of fhat. Throws ExpansionLimit when an intermediate
// polynomial exceeds `term_cap` terms (0 = unlimited).
Instrumented instrument(const ProgramSpec& spec, const RoundingConfig& cfg, std::size_t term_cap = 0);
Instrumented instrument(const InstrumentedGraph& graph, std::size_t term_cap = 0);

struct ErrorDecomposition {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Polynomial> s;  // coefficient of e_j in l, over the unit box variables
  Interval h_bound;           // encloses h over X x [-eps, eps]^m
  Rational epsilon;
  std::vector<ErrorSource> provenance;
  std::vector<AffineMap> unit_maps;  // x_i = offset + slope * u_i
  unsigned f_degree = 0;             // total degree of f
  std::vector<unsigned> f_multidegree;
  bool exact_remainder = true;  // h enclosed from its exact expansion (vs. first-order propagation)
};

struct ConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

std::vector<AffineMap> unit_box_maps(std::span<const Interval> box);

// r = fhat - f, moved to the unit box, split into sum s_j e_j + h.
ErrorDecomposition decompose(const Polynomial& fhat, const Polynomial& f, std::span<const Interval> box,
                             const Rational& epsilon, std::vector<ErrorSource> provenance = {});

// Same s_j as `decompose`, but h is enclosed by forward propagation of
// first-order forms with interval remainders, without expanding fhat.
ErrorDecomposition linearize(const InstrumentedGraph& graph, const RoundingConfig& cfg);

// Exact route when fhat stays below `term_cap` terms, otherwise `linearize`.
ErrorDecomposition analyze(const ProgramSpec& spec, const RoundingConfig& cfg, std::size_t term_cap = 200000);

struct ScaledProblem {
  const std::vector<Polynomial>& s;  // l' = sum_j s_j(u) e_j on [0,1]^n x [-1,1]^m
  std::size_t n;
  std::size_t m;
};

ScaledProblem scaled_linear_bound_inputs(const ErrorDecomposition& dec);

// eps * l_bound + max(|lo|, |hi|) of h_bound.
Rational absolute_bound(const ErrorDecomposition& dec, const Rational& scaled_l_bound);

}  // namespace fpcert
