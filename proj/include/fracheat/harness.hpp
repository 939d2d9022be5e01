#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fracheat/mild.hpp"
#include "fracheat/noise.hpp"

// Configuration, Monte Carlo orchestration, validation suites and reports.
namespace fracheat::harness {

struct RunConfig {
  double hurst = 0.75;
  double p = 2.0;
  double alpha = 1.0;
  std::optional<double> C;  // defaults to 1 + alpha
  double horizon = 1.0;
  double u0_amplitude = 0.1;  // u0 = amplitude * e_1
  std::size_t modes = 64;
  std::size_t steps = 512;
  std::size_t points = 4096;
  std::size_t paths = 4;
  noise::Sampler sampler = noise::Sampler::circulant;
  double tol = 1e-8;
  std::size_t max_iters = 200;
  double ball_slack = 0.02;
  double ratio_slack = 0.05;
  std::uint64_t seed = 42;
  std::filesystem::path out = "fracheat_out";
  bool write_z_norms = false;
  int threads = 0;  // 0: OpenMP default / FRACHEAT_THREADS

  double lipschitz_constant() const { return C.value_or(1.0 + alpha); }

  /// Sets one key from its textual value. Throws std::invalid_argument on an
  /// unknown key or malformed value.
  void set(const std::string& key, const std::string& value);
  /// key = value lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);
  /// Canonical key = value text of every field that influences results.
  std::string canonical() const;
  std::uint64_t hash() const;

  mild::ProblemSpec problem() const;
};

struct PathRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double K0 = 0.0;
  double T0 = 0.0;
  double ctilde_T0 = 0.0;
  double cond1 = 0.0;
  double cond2 = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  double ratio = 0.0;
  double sup_norm = 0.0;
  std::string status = "ok";
  std::vector<double> z_norms;  // ||z(t_k)||_p, only when requested
};

struct SuiteOutcome {
  std::string name;
  bool passed = false;
  std::vector<std::string> details;
};

struct Summary {
  std::size_t paths = 0;
  std::size_t converged = 0;
  double pass_rate = 0.0;
  std::map<std::string, double> T0_quantiles;
  std::map<std::string, double> K0_quantiles;
};

struct RunReport {
  RunConfig config;
  mild::HypothesisReport hypotheses;
  std::vector<PathRecord> records;
  std::vector<SuiteOutcome> validation;

  bool passed() const;
};

/// One solve per path; each path owns its noise stream derive_seed(seed, index).
RunReport run(const RunConfig& config);

Summary summarize(const std::vector<PathRecord>& records);

/// Writes paths.csv and report.json (and z_norm_{k}.csv when present) into dir.
void emit_tables(const RunReport& report, const std::filesystem::path& dir);
/// Reads back a report.json written by emit_tables.
RunReport load_report(const std::filesystem::path& report_json);

std::string paths_csv(const std::vector<PathRecord>& records);
std::string report_json(const RunReport& report);

enum class Suite { fbm, kernel, semigroup, convolution, solver, all };
Suite parse_suite(const std::string& name);

std::vector<SuiteOutcome> validate(Suite suite);

}  // namespace fracheat::harness
