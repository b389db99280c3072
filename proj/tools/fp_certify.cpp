#include "fpcert/bench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

namespace fs = std::filesystem;
using namespace fpcert;

namespace {

std::vector<Method> methods_for(const std::string& name) {
  if (name == "all") return {Method::Interval, Method::Bernstein, Method::Krivine};
  return {parse_method(name)};
}

// Markdown to stdout; JSON to a file, or to stdout in place of the table when the path is "-".
void print_results(const std::vector<BenchmarkResult>& results, const std::string& json_path) {
  if (json_path == "-") {
    std::cout << report_json(results).dump(2) << "\n";
    return;
  }
  std::cout << report_markdown(results);
  if (json_path.empty()) return;
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("cannot write " + json_path);
  out << report_json(results).dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds on floating-point roundoff of polynomial programs"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string method = "all";
  std::string precision = "binary64";
  bool exact_lp = false, float_lp = false;
  std::string json;
  std::string export_lp;

  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--method", method, "bernstein, krivine, interval or all")
        ->check(CLI::IsMember({"bernstein", "krivine", "interval", "all"}));
    cmd->add_option("--precision", precision, "binary64 or binary32")->check(CLI::IsMember({"binary64", "binary32"}));
    cmd->add_option("--degree-increment", opts.degree_increment, "Bernstein degree above the default");
    cmd->add_option("--order-increment", opts.order_increment, "relaxation order above deg l'");
    auto* ex = cmd->add_flag("--exact-lp", exact_lp, "solve the LPs in exact arithmetic");
    cmd->add_flag("--float-lp", float_lp, "solve the LPs in floating point and certify")->excludes(ex);
    cmd->add_flag("--all-constants", opts.all_constants, "round every constant, representable or not");
    cmd->add_flag("--free-negation", opts.free_negation, "treat negation as exact");
    cmd->add_flag("--share-subexpressions", opts.share_subexpressions, "structurally equal subterms round once");
    cmd->add_option("--json", json, "write results as JSON to this path (- for stdout)");
    cmd->add_option("--timeout", opts.timeout_seconds, "seconds per engine run");
    cmd->add_option("--repeat", opts.repeat, "runs to average timing over");
  };

  std::string file;
  auto* run_cmd = app.add_subcommand("run", "bound one program");
  run_cmd->add_option("file", file, "program file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--export-lp", export_lp, "write the relaxation LPs (lower; upper to <stem>.upper.lp)");
  add_run_flags(run_cmd);

  unsigned gen_n = 0, gen_sum = 0, gen_deg = 0;
  auto* gen_cmd = app.add_subcommand("gen-ex", "print a generated ex benchmark");
  gen_cmd->add_option("n", gen_n)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("nSum", gen_sum)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("deg", gen_deg)->required()->check(CLI::PositiveNumber);

  std::string dir;
  bool parallel = false;
  auto* bench_cmd = app.add_subcommand("bench", "bound every .fpp program in a directory");
  bench_cmd->add_option("dir", dir, "benchmark directory")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_flag("--parallel", parallel, "run programs concurrently");
  add_run_flags(bench_cmd);

  CLI11_PARSE(app, argc, argv);

  opts.precision = precision == "binary32" ? Precision::Binary32 : Precision::Binary64;
  if (exact_lp) opts.lp_mode = LPMode::Exact;
  if (float_lp) opts.lp_mode = LPMode::Float;
  if (!export_lp.empty()) opts.export_lp = export_lp;

  try {
    if (*gen_cmd) {
      std::cout << pretty_print(generate_ex(gen_n, gen_sum, gen_deg));
      return 0;
    }
    if (*run_cmd) {
      const ProgramSpec spec = load_program(file);
      std::vector<BenchmarkResult> results;
      for (Method m : methods_for(method)) results.push_back(run(spec, m, opts));
      print_results(results, json);
      return 0;
    }
    if (*bench_cmd) {
      if (bench_cmd->count("--repeat") == 0) opts.repeat = 5;
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".fpp") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      const auto methods = methods_for(method);

      std::vector<std::future<std::vector<BenchmarkResult>>> jobs;
      for (const auto& path : files) {
        auto job = [path, methods, opts] {
          const ProgramSpec spec = load_program(path.string());
          std::vector<BenchmarkResult> out;
          for (Method m : methods) out.push_back(run(spec, m, opts));
          return out;
        };
        jobs.push_back(std::async(parallel ? std::launch::async : std::launch::deferred, job));
      }
      std::vector<BenchmarkResult> results;
      for (auto& j : jobs) {
        auto part = j.get();
        results.insert(results.end(), part.begin(), part.end());
      }
      print_results(results, json);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
