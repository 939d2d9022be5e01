// fracheat: sample fBm-driven heat equations, solve them by Picard iteration,
// and run the validation suites.
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "fracheat/harness.hpp"
#include "fracheat/parallel.hpp"

namespace {

int thread_count(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("FRACHEAT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace fracheat;
  CLI::App app{"Local mild solutions of the fBm-driven stochastic heat equation"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: FRACHEAT_THREADS or OpenMP default)");

  // run
  auto* run_cmd = app.add_subcommand("run", "Monte Carlo solve; writes report.json and paths.csv");
  std::string config_file;
  std::map<std::string, std::string> overrides;
  run_cmd->add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
  const std::pair<const char*, const char*> keys[] = {
      {"hurst", "Hurst parameter H"},       {"p", "Spatial integrability exponent"},
      {"alpha", "Nonlinearity exponent"},   {"C", "Lipschitz-type constant (default 1 + alpha)"},
      {"T", "Time horizon"},                {"u0-amplitude", "u0 = amplitude * e_1"},
      {"modes", "Spectral modes N"},        {"steps", "Time steps n"},
      {"points", "Spatial intervals M"},    {"paths", "Monte Carlo paths P"},
      {"sampler", "cholesky | circulant"},  {"tol", "Picard tolerance"},
      {"max-iters", "Picard iteration cap"}, {"seed", "Master seed"},
      {"out", "Output directory"},
  };
  for (const auto& [key, help] : keys) {
    std::string name = key;
    run_cmd->add_option_function<std::string>(
        "--" + name,
        [&overrides, name](const std::string& v) {
          std::string k = name;
          for (char& c : k)
            if (c == '-') c = '_';
          overrides[k] = v;
        },
        help);
  }
  bool z_norms = false;
  run_cmd->add_flag("--z-norms", z_norms, "Also write z_norm_{k}.csv per path");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Run a validation suite");
  std::string suite = "all";
  validate_cmd->add_option("--suite", suite, "fbm | kernel | semigroup | convolution | solver | all")
      ->check(CLI::IsMember({"fbm", "kernel", "semigroup", "convolution", "solver", "all"}));

  // tables
  auto* tables_cmd = app.add_subcommand("tables", "Re-emit paths.csv and report.json from a report");
  std::string report_path;
  std::string tables_out;
  tables_cmd->add_option("--report", report_path, "report.json of a previous run")->required()->check(CLI::ExistingFile);
  tables_cmd->add_option("--out", tables_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage errors share the exit code of other failures
  }

  try {
    if (*run_cmd) {
      harness::RunConfig config;
      if (!config_file.empty()) config.load_file(config_file);
      for (const auto& [k, v] : overrides) config.set(k, v);
      if (z_norms) config.write_z_norms = true;
      set_thread_count(thread_count(threads > 0 ? threads : config.threads));

      const auto report = harness::run(config);
      harness::emit_tables(report, config.out);
      for (const auto& c : report.hypotheses.checks)
        std::cout << (c.satisfied ? "ok   " : "FAIL ") << "hypothesis " << c.name << " (" << c.lhs << " vs " << c.rhs << ")\n";
      for (const auto& v : report.validation) {
        std::cout << (v.passed ? "ok   " : "FAIL ") << v.name << '\n';
        for (const auto& d : v.details) std::cout << "       " << d << '\n';
      }
      std::cout << report.records.size() << " paths written to " << config.out.string() << '\n';
      return report.passed() ? 0 : 1;
    }
    if (*validate_cmd) {
      set_thread_count(thread_count(threads));
      bool ok = true;
      for (const auto& outcome : harness::validate(harness::parse_suite(suite))) {
        std::cout << (outcome.passed ? "PASS " : "FAIL ") << outcome.name << '\n';
        for (const auto& d : outcome.details) std::cout << "  " << d << '\n';
        ok = ok && outcome.passed;
      }
      return ok ? 0 : 1;
    }
    if (*tables_cmd) {
      const auto report = harness::load_report(report_path);
      harness::emit_tables(report, tables_out);
      std::cout << report.records.size() << " rows written to " << tables_out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
