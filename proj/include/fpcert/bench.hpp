#pragma once

#include "fpcert/bernstein.hpp"
#include "fpcert/expr.hpp"
#include "fpcert/krivine.hpp"
#include "fpcert/rounding.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fpcert {

enum class Method { Bernstein, Krivine, Interval };

const char* to_string(Method m);
Method parse_method(const std::string& text);

struct RunOptions {
  Precision precision = Precision::Binary64;
  unsigned degree_increment = 0;
  unsigned order_increment = 0;
  LPMode lp_mode = LPMode::Auto;
  bool all_constants = false;
  bool free_negation = false;
  bool share_subexpressions = false;
  double timeout_seconds = 300;
  unsigned repeat = 1;
  std::optional<std::string> export_lp;  // lower direction to this path, upper to "<stem>.upper.lp"
  std::size_t term_cap = 200000;

  RoundingConfig rounding(const ProgramSpec& spec) const;
};

struct BenchmarkResult {
  std::string name;
  Method method = Method::Bernstein;
  std::string precision = "binary64";
  std::size_t n = 0;
  std::size_t m = 0;
  unsigned d = 0;                   // degree of l'
  Rational epsilon;
  Rational bound_l_scaled;          // bound on |l'|
  Rational h_bound;                 // max(|lo|, |hi|) of the enclosure of h
  Rational absolute_bound;          // epsilon * bound_l_scaled + h_bound
  bool sharp = false;
  std::optional<std::pair<std::size_t, std::size_t>> lp_size;  // nominal (columns, rows)
  double wall_time = 0;             // seconds, mean over repeats
  bool timeout = false;
  std::string note;
};

// Sum over j of max |s_j| on the unit box: exact range for one variable, term-wise otherwise.
Rational interval_linear_bound(const std::vector<Polynomial>& s, std::size_t n);

BenchmarkResult run(const ProgramSpec& spec, Method method, const RunOptions& opts = {});
BenchmarkResult run(const std::string& path, Method method, const RunOptions& opts = {});

// sum_{j=0}^{nSum} prod_{k=1}^{deg} (x_1 + ... + x_n) on [-1,1]^n, sums and products associated left.
ProgramSpec generate_ex(unsigned n, unsigned n_sum, unsigned deg);
// Benchmark label "ex-<n>-<deg>-<nSum>".
std::string ex_label(unsigned n, unsigned n_sum, unsigned deg);

std::string report_markdown(const std::vector<BenchmarkResult>& results);
nlohmann::json to_json(const BenchmarkResult& r);
BenchmarkResult result_from_json(const nlohmann::json& j);
nlohmann::json report_json(const std::vector<BenchmarkResult>& results);
std::vector<BenchmarkResult> results_from_json(const nlohmann::json& j);

}  // namespace fpcert
