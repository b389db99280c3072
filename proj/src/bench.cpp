#include "fpcert/bench.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

namespace fpcert {

const char* to_string(Method m) {
  switch (m) {
    case Method::Bernstein: return "bernstein";
    case Method::Krivine: return "krivine";
    case Method::Interval: return "interval";
  }
  return "unknown";
}

Method parse_method(const std::string& text) {
  if (text == "bernstein") return Method::Bernstein;
  if (text == "krivine") return Method::Krivine;
  if (text == "interval") return Method::Interval;
  throw std::invalid_argument("unknown method '" + text + "'");
}

RoundingConfig RunOptions::rounding(const ProgramSpec& spec) const {
  RoundingConfig cfg = RoundingConfig::for_precision(precision).with_conventions(spec);
  if (all_constants) cfg.tag_exact_constants = false;
  if (free_negation) cfg.free_negation = true;
  if (share_subexpressions) cfg.share_subexpressions = true;
  return cfg;
}

Rational interval_linear_bound(const std::vector<Polynomial>& s, std::size_t n) {
  const std::vector<Interval> unit(n, Interval(Rational(0), Rational(1)));
  Rational sum = 0;
  for (const auto& p : s) {
    if (p.is_zero()) continue;
    sum += (n == 1 ? univariate_range(p) : interval_eval(p, unit)).magnitude();
  }
  return sum;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string upper_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ".upper.lp";
  return path.substr(0, dot) + ".upper" + path.substr(dot);
}

void export_relaxation(const KSRelaxation& lp, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write LP file '" + path + "'");
  write_lp(out, lp.to_standard_form());
}

struct EngineOutput {
  Rational bound;
  bool sharp = false;
  std::optional<std::pair<std::size_t, std::size_t>> lp_size;
  bool timeout = false;
  std::string note;
};

EngineOutput run_engine(const ErrorDecomposition& dec, Method method, const RunOptions& opts, Clock::time_point start) {
  EngineOutput out;
  switch (method) {
    case Method::Interval: out.bound = interval_linear_bound(dec.s, dec.n); break;
    case Method::Bernstein: {
      MultiIndex k = common_degree(dec.s, dec.n);
      for (std::size_t i = 0; i < dec.n; ++i) k[i] = std::max(k[i], dec.f_multidegree[i]) + opts.degree_increment;
      const LinearBound lb = linear_bound(dec.s, k);
      out.bound = lb.upper;
      out.sharp = lb.sharp;
      break;
    }
    case Method::Krivine: {
      KrivineOptions ko;
      ko.order_increment = opts.order_increment;
      ko.mode = opts.lp_mode;
      ko.solver.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(opts.timeout_seconds));
      if (opts.export_lp) {
        const unsigned order = linear_part_degree(dec.s) + opts.order_increment;
        export_relaxation(build_lp(dec.s, dec.n, order, Direction::Lower), *opts.export_lp);
        export_relaxation(build_lp(dec.s, dec.n, order, Direction::Upper), upper_path(*opts.export_lp));
      }
      const KrivineResult kr = krivine_bound(dec.s, dec.n, ko);
      out.bound = kr.bound;
      out.lp_size = std::make_pair(kr.columns, kr.rows);
      out.timeout = kr.lower.status == LPStatus::TimeLimit || kr.upper.status == LPStatus::TimeLimit;
      if (kr.lower.status != LPStatus::Optimal || kr.upper.status != LPStatus::Optimal)
        out.note = std::string("lp ") + to_string(kr.lower.status) + "/" + to_string(kr.upper.status);
      break;
    }
  }
  return out;
}

}  // namespace

BenchmarkResult run(const ProgramSpec& spec, Method method, const RunOptions& opts) {
  const RoundingConfig cfg = opts.rounding(spec);
  BenchmarkResult res;
  res.name = spec.name;
  res.method = method;
  res.precision = cfg.precision_name;
  res.n = spec.n();
  res.epsilon = cfg.epsilon;

  const unsigned repeats = std::max(1u, opts.repeat);
  double total = 0;
  for (unsigned r = 0; r < repeats; ++r) {
    const auto start = Clock::now();
    const ErrorDecomposition dec = analyze(spec, cfg, opts.term_cap);
    const EngineOutput eng = run_engine(dec, method, opts, start);
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    total += secs;

    res.m = dec.m;
    res.d = linear_part_degree(dec.s);
    res.bound_l_scaled = eng.bound;
    res.h_bound = dec.h_bound.magnitude();
    res.absolute_bound = absolute_bound(dec, eng.bound);
    res.sharp = eng.sharp;
    res.lp_size = eng.lp_size;
    res.timeout = eng.timeout || secs > opts.timeout_seconds;
    res.note = eng.note;
    if (!dec.exact_remainder) res.note += std::string(res.note.empty() ? "" : "; ") + "first-order remainder";
    if (res.timeout) {
      ++r;
      total = total / r * repeats;
      break;
    }
  }
  res.wall_time = total / repeats;
  return res;
}

BenchmarkResult run(const std::string& path, Method method, const RunOptions& opts) {
  return run(load_program(path), method, opts);
}

ProgramSpec generate_ex(unsigned n, unsigned n_sum, unsigned deg) {
  if (n < 1 || n_sum < 1 || deg < 1) throw std::invalid_argument("generate_ex: n, nSum and deg must be >= 1");
  ProgramSpec spec;
  spec.name = ex_label(n, n_sum, deg);
  spec.conventions.insert("share-subexpressions");
  for (unsigned i = 1; i <= n; ++i) spec.inputs.push_back({"x" + std::to_string(i), Rational(-1), Rational(1)});

  auto inner_sum = [&] {
    ExprPtr s = make_variable(0);
    for (unsigned i = 1; i < n; ++i) s = make_add(s, make_variable(i));
    return s;
  };
  auto product = [&] {
    ExprPtr p = inner_sum();
    for (unsigned k = 1; k < deg; ++k) p = make_mul(p, inner_sum());
    return p;
  };
  ExprPtr body = product();
  for (unsigned j = 1; j <= n_sum; ++j) body = make_add(body, product());
  spec.body = body;
  return spec;
}

std::string ex_label(unsigned n, unsigned n_sum, unsigned deg) {
  return "ex-" + std::to_string(n) + "-" + std::to_string(deg) + "-" + std::to_string(n_sum);
}

std::string report_markdown(const std::vector<BenchmarkResult>& results) {
  std::ostringstream out;
  out << "| Benchmark | n | m | d | method | bound l' | h | absolute bound | sharp | LP (cols x rows) | time (s) |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : results) {
    out << "| " << r.name << " | " << r.n << " | " << r.m << " | " << r.d << " | " << to_string(r.method) << " | "
        << to_decimal_upper(r.bound_l_scaled, 4) << " | " << to_decimal_upper(r.h_bound, 3) << " | ";
    if (r.timeout)
      out << "TIMEOUT (" << to_decimal_upper(r.absolute_bound, 3) << ")";
    else
      out << to_decimal_upper(r.absolute_bound, 3);
    out << " | " << (r.method == Method::Bernstein ? (r.sharp ? "yes" : "no") : "-") << " | ";
    if (r.lp_size)
      out << r.lp_size->first << " x " << r.lp_size->second;
    else
      out << "-";
    std::ostringstream t;
    t.setf(std::ios::fixed);
    t.precision(3);
    t << r.wall_time;
    out << " | " << t.str() << " |\n";
  }
  return out.str();
}

nlohmann::json to_json(const BenchmarkResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["method"] = to_string(r.method);
  j["precision"] = r.precision;
  j["n"] = r.n;
  j["m"] = r.m;
  j["d"] = r.d;
  auto rational = [](const Rational& q) {
    return nlohmann::json{{"exact", to_string(q)}, {"decimal", to_decimal_upper(q, 6)}};
  };
  j["epsilon"] = rational(r.epsilon);
  j["bound_l_scaled"] = rational(r.bound_l_scaled);
  j["h_bound"] = rational(r.h_bound);
  j["absolute_bound"] = rational(r.absolute_bound);
  j["sharp"] = r.sharp;
  if (r.lp_size)
    j["lp_size"] = {{"columns", r.lp_size->first}, {"rows", r.lp_size->second}};
  else
    j["lp_size"] = nullptr;
  j["wall_time"] = r.wall_time;
  j["timeout"] = r.timeout;
  j["note"] = r.note;
  return j;
}

BenchmarkResult result_from_json(const nlohmann::json& j) {
  BenchmarkResult r;
  r.name = j.at("name").get<std::string>();
  r.method = parse_method(j.at("method").get<std::string>());
  r.precision = j.at("precision").get<std::string>();
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.d = j.at("d").get<unsigned>();
  auto rational = [&](const char* key) { return parse_rational(j.at(key).at("exact").get<std::string>()); };
  r.epsilon = rational("epsilon");
  r.bound_l_scaled = rational("bound_l_scaled");
  r.h_bound = rational("h_bound");
  r.absolute_bound = rational("absolute_bound");
  r.sharp = j.at("sharp").get<bool>();
  if (!j.at("lp_size").is_null())
    r.lp_size = std::make_pair(j["lp_size"].at("columns").get<std::size_t>(), j["lp_size"].at("rows").get<std::size_t>());
  r.wall_time = j.at("wall_time").get<double>();
  r.timeout = j.at("timeout").get<bool>();
  r.note = j.value("note", "");
  return r;
}

nlohmann::json report_json(const std::vector<BenchmarkResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  return {{"results", arr}};
}

std::vector<BenchmarkResult> results_from_json(const nlohmann::json& j) {
  std::vector<BenchmarkResult> out;
  for (const auto& item : j.at("results")) out.push_back(result_from_json(item));
  return out;
}

}  // namespace fpcert
