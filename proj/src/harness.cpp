#include "fracheat/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fracheat/fbm.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/rng.hpp"
#include "fracheat/stats.hpp"

namespace fracheat::harness {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size() || !std::isfinite(v))
    throw std::invalid_argument("invalid number for '" + key + "': " + value);
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty())
    throw std::invalid_argument("invalid unsigned integer for '" + key + "': " + value);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw std::invalid_argument("invalid boolean for '" + key + "': " + value);
}

const char* sampler_name(noise::Sampler s) { return s == noise::Sampler::cholesky ? "cholesky" : "circulant"; }

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "hurst") hurst = parse_double(key, value);
  else if (key == "p") p = parse_double(key, value);
  else if (key == "alpha") alpha = parse_double(key, value);
  else if (key == "C") C = parse_double(key, value);
  else if (key == "T" || key == "horizon") horizon = parse_double(key, value);
  else if (key == "u0_amplitude") u0_amplitude = parse_double(key, value);
  else if (key == "modes") modes = parse_unsigned(key, value);
  else if (key == "steps") steps = parse_unsigned(key, value);
  else if (key == "points") points = parse_unsigned(key, value);
  else if (key == "paths") paths = parse_unsigned(key, value);
  else if (key == "sampler") {
    if (value == "cholesky") sampler = noise::Sampler::cholesky;
    else if (value == "circulant") sampler = noise::Sampler::circulant;
    else throw std::invalid_argument("unknown sampler: " + value);
  } else if (key == "tol") tol = parse_double(key, value);
  else if (key == "max_iters") max_iters = parse_unsigned(key, value);
  else if (key == "ball_slack") ball_slack = parse_double(key, value);
  else if (key == "ratio_slack") ratio_slack = parse_double(key, value);
  else if (key == "seed") seed = parse_unsigned(key, value);
  else if (key == "out") out = value;
  else if (key == "z_norms") write_z_norms = parse_bool(key, value);
  else if (key == "threads") threads = static_cast<int>(parse_unsigned(key, value));
  else throw std::invalid_argument("unknown configuration key: " + key);
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "hurst = " << format_double(hurst) << '\n'
     << "p = " << format_double(p) << '\n'
     << "alpha = " << format_double(alpha) << '\n'
     << "C = " << format_double(lipschitz_constant()) << '\n'
     << "T = " << format_double(horizon) << '\n'
     << "u0_amplitude = " << format_double(u0_amplitude) << '\n'
     << "modes = " << modes << '\n'
     << "steps = " << steps << '\n'
     << "points = " << points << '\n'
     << "paths = " << paths << '\n'
     << "sampler = " << sampler_name(sampler) << '\n'
     << "tol = " << format_double(tol) << '\n'
     << "max_iters = " << max_iters << '\n'
     << "ball_slack = " << format_double(ball_slack) << '\n'
     << "ratio_slack = " << format_double(ratio_slack) << '\n'
     << "seed = " << seed << '\n'
     << "z_norms = " << (write_z_norms ? "true" : "false") << '\n';
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

mild::ProblemSpec RunConfig::problem() const {
  mild::ProblemSpec spec;
  spec.hurst = fbm::HurstParam(hurst);
  spec.p = p;
  spec.alpha = alpha;
  spec.C = lipschitz_constant();
  spec.horizon = horizon;
  spectral::SpectralField u0(modes);
  u0.coeffs[0] = u0_amplitude;
  spec.u0 = spectral::Basis(modes, points).synthesize(u0);
  return spec;
}

// ---------------------------------------------------------------------------
// run

bool RunReport::passed() const {
  return hypotheses.passed() &&
         std::all_of(validation.begin(), validation.end(), [](const SuiteOutcome& s) { return s.passed; });
}

namespace {

void check_run_config(const RunConfig& c) {
  if (c.modes == 0) throw std::invalid_argument("modes must be positive");
  if (c.steps < 2) throw std::invalid_argument("steps must be at least 2");
  if (c.points < 2 * c.modes) throw std::invalid_argument("points must be at least 2 * modes");
  if (!(c.horizon > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(c.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(c.p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  if (!(c.lipschitz_constant() >= 0.0)) throw std::invalid_argument("C must be nonnegative");
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
}

mild::HypothesisReport hypotheses_for(const RunConfig& c) {
  // Reported even when H is outside the range the solver accepts.
  mild::HypothesisReport rep;
  const double d = 1.0;
  const double H = c.hurst;
  const double m = c.p / (1.0 + c.alpha);
  rep.checks.push_back({"H > 1/2", H > 0.5, H, 0.5});
  rep.checks.push_back({"H > d/4", H > d / 4.0, H, d / 4.0});
  rep.checks.push_back({"pH >= 1", c.p * H >= 1.0, c.p * H, 1.0});
  rep.checks.push_back({"2p > alpha d", 2.0 * c.p > c.alpha * d, 2.0 * c.p, c.alpha * d});
  rep.checks.push_back({"m >= 1", m >= 1.0, m, 1.0});
  rep.checks.push_back({"H < 1", H < 1.0, H, 1.0});
  return rep;
}

PathRecord solve_path(const RunConfig& config, const mild::ProblemSpec& spec, std::size_t index) {
  PathRecord rec;
  rec.index = index;
  rec.seed = derive_seed(config.seed, index);
  const fbm::TimeGrid grid(config.horizon, config.steps);
  const auto ens = noise::sample_modes(config.modes, spec.hurst, grid, rec.seed, config.sampler);
  const auto z = noise::stochastic_convolution(ens);
  if (config.write_z_norms) rec.z_norms = noise::lp_norm_series(z, spectral::Basis(config.modes, config.points), config.p);

  mild::PicardOptions options;
  options.tol = config.tol;
  options.max_iters = config.max_iters;
  options.ball_slack = config.ball_slack;
  auto fill = [&rec](const mild::PicardTrace& tr) {
    rec.K0 = tr.K0;
    rec.T0 = tr.T0;
    rec.ctilde_T0 = tr.ctilde_T0;
    rec.cond1 = tr.cond1;
    rec.cond2 = tr.cond2;
    rec.converged = tr.converged;
    rec.iterations = tr.iterations;
    rec.ratio = tr.max_ratio;
    rec.sup_norm = tr.history.empty() ? 0.0 : tr.history.back().sup_norm;
  };
  try {
    const auto result = mild::picard_solve(spec, z, options);
    fill(result.trace);
  } catch (const mild::PicardError& e) {
    fill(e.trace());
    rec.status = e.kind() == mild::PicardError::Kind::no_convergence ? "no_convergence" : "left_ball";
  } catch (const std::exception& e) {
    rec.status = std::string("error: ") + e.what();
  }
  return rec;
}

}  // namespace

RunReport run(const RunConfig& config) {
  RunReport report;
  report.config = config;
  report.hypotheses = hypotheses_for(config);
  if (!report.hypotheses.passed()) return report;
  check_run_config(config);

  const mild::ProblemSpec spec = config.problem();
  report.records = parallel_map(config.paths, [&](std::size_t k) { return solve_path(config, spec, k); });

  SuiteOutcome solved{"paths_converged", true, {}};
  SuiteOutcome contraction{"contraction_ratio", true, {}};
  SuiteOutcome stopping{"stopping_time", true, {}};
  for (const auto& r : report.records) {
    const std::string tag = "path " + std::to_string(r.index) + ": ";
    if (r.status != "ok" || !r.converged) {
      solved.passed = false;
      solved.details.push_back(tag + r.status);
      continue;
    }
    if (r.ratio > r.ctilde_T0 + config.ratio_slack) {
      contraction.passed = false;
      contraction.details.push_back(tag + "ratio " + format_double(r.ratio) + " > Ctilde(T0) " +
                                    format_double(r.ctilde_T0) + " + slack");
    }
    if (r.ctilde_T0 > 1.0 + 1e-9 || !(r.T0 > 0.0) || r.T0 > config.horizon) {
      stopping.passed = false;
      stopping.details.push_back(tag + "inconsistent T0 " + format_double(r.T0));
    }
  }
  report.validation = {solved, contraction, stopping};
  return report;
}

// ---------------------------------------------------------------------------
// tables

Summary summarize(const std::vector<PathRecord>& records) {
  Summary s;
  s.paths = records.size();
  std::vector<double> t0, k0;
  for (const auto& r : records) {
    if (r.converged) ++s.converged;
    if (r.status.rfind("error", 0) == 0) continue;
    t0.push_back(r.T0);
    k0.push_back(r.K0);
  }
  s.pass_rate = s.paths == 0 ? 1.0 : static_cast<double>(s.converged) / static_cast<double>(s.paths);
  const std::pair<const char*, double> levels[] = {{"min", 0.0}, {"q25", 0.25}, {"median", 0.5}, {"q75", 0.75}, {"max", 1.0}};
  for (const auto& [name, q] : levels) {
    s.T0_quantiles[name] = stats::quantile(t0, q);
    s.K0_quantiles[name] = stats::quantile(k0, q);
  }
  return s;
}

std::string paths_csv(const std::vector<PathRecord>& records) {
  std::ostringstream os;
  os << "index,seed,K0,T0,ctilde_T0,cond1,cond2,converged,iterations,ratio,sup_norm,status\n";
  for (const auto& r : records) {
    os << r.index << ',' << r.seed << ',' << format_double(r.K0) << ',' << format_double(r.T0) << ','
       << format_double(r.ctilde_T0) << ',' << format_double(r.cond1) << ',' << format_double(r.cond2) << ','
       << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << format_double(r.ratio) << ','
       << format_double(r.sup_norm) << ',' << '"' << r.status << '"' << '\n';
  }
  return os.str();
}

namespace {

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  std::istringstream in(c.canonical());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    j[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return j;
}

}  // namespace

std::string report_json(const RunReport& report) {
  using json = nlohmann::ordered_json;
  json j;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(report.config.hash()));
  j["provenance"] = {{"config_hash", hash}, {"seed", report.config.seed}, {"version", kVersion}};
  j["config"] = config_json(report.config);

  json hyp = json::array();
  for (const auto& c : report.hypotheses.checks)
    hyp.push_back({{"name", c.name}, {"satisfied", c.satisfied}, {"lhs", c.lhs}, {"rhs", c.rhs}});
  j["hypotheses"] = hyp;

  const Summary s = summarize(report.records);
  j["summary"] = {{"paths", s.paths},
                  {"converged", s.converged},
                  {"pass_rate", s.pass_rate},
                  {"T0_quantiles", s.T0_quantiles},
                  {"K0_quantiles", s.K0_quantiles}};

  json val = json::array();
  for (const auto& v : report.validation) val.push_back({{"name", v.name}, {"passed", v.passed}, {"details", v.details}});
  j["validation"] = val;
  j["passed"] = report.passed();

  json recs = json::array();
  for (const auto& r : report.records) {
    recs.push_back({{"index", r.index},
                    {"seed", r.seed},
                    {"K0", r.K0},
                    {"T0", r.T0},
                    {"ctilde_T0", r.ctilde_T0},
                    {"cond1", r.cond1},
                    {"cond2", r.cond2},
                    {"converged", r.converged},
                    {"iterations", r.iterations},
                    {"ratio", r.ratio},
                    {"sup_norm", r.sup_norm},
                    {"status", r.status}});
  }
  j["records"] = recs;
  return j.dump(2) + "\n";
}

void emit_tables(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
  };
  write(dir / "paths.csv", paths_csv(report.records));
  write(dir / "report.json", report_json(report));
  for (const auto& r : report.records) {
    if (r.z_norms.empty()) continue;
    const fbm::TimeGrid grid(report.config.horizon, report.config.steps);
    std::ostringstream os;
    os << "t,z_norm\n";
    for (std::size_t k = 0; k < r.z_norms.size(); ++k)
      os << format_double(grid.point(k)) << ',' << format_double(r.z_norms[k]) << '\n';
    write(dir / ("z_norm_" + std::to_string(r.index) + ".csv"), os.str());
  }
}

RunReport load_report(const std::filesystem::path& report_json_path) {
  std::ifstream in(report_json_path);
  if (!in) throw std::runtime_error("cannot open " + report_json_path.string());
  const auto j = nlohmann::json::parse(in);
  RunReport report;
  for (const auto& [key, value] : j.at("config").items()) report.config.set(key, value.get<std::string>());
  for (const auto& c : j.at("hypotheses"))
    report.hypotheses.checks.push_back(
        {c.at("name").get<std::string>(), c.at("satisfied").get<bool>(), c.at("lhs").get<double>(), c.at("rhs").get<double>()});
  for (const auto& v : j.at("validation"))
    report.validation.push_back(
        {v.at("name").get<std::string>(), v.at("passed").get<bool>(), v.at("details").get<std::vector<std::string>>()});
  for (const auto& r : j.at("records")) {
    PathRecord rec;
    rec.index = r.at("index").get<std::size_t>();
    rec.seed = r.at("seed").get<std::uint64_t>();
    rec.K0 = r.at("K0").get<double>();
    rec.T0 = r.at("T0").get<double>();
    rec.ctilde_T0 = r.at("ctilde_T0").get<double>();
    rec.cond1 = r.at("cond1").get<double>();
    rec.cond2 = r.at("cond2").get<double>();
    rec.converged = r.at("converged").get<bool>();
    rec.iterations = r.at("iterations").get<std::size_t>();
    rec.ratio = r.at("ratio").get<double>();
    rec.sup_norm = r.at("sup_norm").get<double>();
    rec.status = r.at("status").get<std::string>();
    report.records.push_back(std::move(rec));
  }
  return report;
}

// ---------------------------------------------------------------------------
// validation suites (desk scale, fixed seeds)

Suite parse_suite(const std::string& name) {
  if (name == "fbm") return Suite::fbm;
  if (name == "kernel") return Suite::kernel;
  if (name == "semigroup") return Suite::semigroup;
  if (name == "convolution") return Suite::convolution;
  if (name == "solver") return Suite::solver;
  if (name == "all") return Suite::all;
  throw std::invalid_argument("unknown suite: " + name);
}

namespace {

class Outcome {
 public:
  explicit Outcome(std::string name) { result_.name = std::move(name); result_.passed = true; }

  void expect(bool ok, const std::string& what) {
    result_.details.push_back((ok ? "ok   " : "FAIL ") + what);
    if (!ok) result_.passed = false;
  }
  SuiteOutcome take() { return std::move(result_); }

 private:
  SuiteOutcome result_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

SuiteOutcome fbm_suite() {
  Outcome out("fbm");
  const fbm::TimeGrid grid(1.0, 32);
  for (double hv : {0.6, 0.75, 0.9}) {
    const fbm::HurstParam h(hv);
    const std::string tag = "H=" + fmt(hv) + ": ";
    out.expect(fbm::covariance(h, 0.3, 0.8) == fbm::covariance(h, 0.8, 0.3), tag + "covariance symmetric");
    const double c = 2.5;
    const double scaled = fbm::covariance(h, c * 0.3, c * 0.8);
    const double expect = std::pow(c, 2.0 * hv) * fbm::covariance(h, 0.3, 0.8);
    out.expect(std::abs(scaled - expect) <= 1e-12 * std::abs(expect), tag + "self-similar covariance");

    const fbm::CholeskyFactor chol(h, grid);
    const std::size_t paths = 20000;
    const auto samples = parallel_map(paths, [&](std::size_t i) { return chol.sample(derive_seed(11, i)).values; });
    const std::pair<std::size_t, std::size_t> pairs[] = {{4, 28}, {8, 16}, {16, 32}, {32, 32}};
    for (const auto& [a, b] : pairs) {
      std::vector<double> x(paths), y(paths);
      for (std::size_t i = 0; i < paths; ++i) {
        x[i] = samples[i][a];
        y[i] = samples[i][b];
      }
      const auto est = stats::sample_covariance(x, y);
      const double target = fbm::covariance(h, grid.point(a), grid.point(b));
      out.expect(est.z_score(target) < 5.0, tag + "Cholesky cov(t_" + std::to_string(a) + ", t_" +
                                                std::to_string(b) + ") z=" + fmt(est.z_score(target)));
    }

    const fbm::CirculantFactor circ(h, grid);
    const std::size_t draws = 4000;
    auto end_values = [&](const auto& factor, std::uint64_t base) {
      return parallel_map(draws, [&](std::size_t i) { return factor.sample(derive_seed(base, i)).values.back(); });
    };
    const auto ks = stats::ks_two_sample(end_values(circ, 21), end_values(chol, 22));
    out.expect(ks.p_value > 1e-3, tag + "circulant vs Cholesky KS p=" + fmt(ks.p_value));
  }
  return out.take();
}

SuiteOutcome kernel_suite() {
  Outcome out("kernel");
  const fbm::HurstParam h(0.75);
  for (double s : {0.3, 0.6, 1.0})
    for (double t : {0.3, 0.6, 1.0}) {
      const double lhs = fbm::kernel_product_integral(h, t, s);
      const double rhs = fbm::covariance(h, s, t);
      out.expect(std::abs(lhs - rhs) <= 1e-3,
                 "factorization (s,t)=(" + fmt(s) + "," + fmt(t) + ") err=" + fmt(std::abs(lhs - rhs)));
    }
  for (double hv : {0.6, 0.75})
    for (double t : {0.25, 0.5, 1.0}) {
      const fbm::HurstParam hh(hv);
      const double lhs = fbm::kernel_product_integral(hh, t, t);
      const double rhs = std::pow(t, 2.0 * hv);
      out.expect(std::abs(lhs - rhs) <= 1e-3,
                 "isometry H=" + fmt(hv) + " t=" + fmt(t) + " err=" + fmt(std::abs(lhs - rhs)));
    }
  return out.take();
}

SuiteOutcome semigroup_suite() {
  Outcome out("semigroup");
  const std::size_t modes = 32, intervals = 1024;
  const spectral::Basis basis(modes, intervals);
  std::size_t violations = 0, cases = 0;
  double worst = 0.0;
  for (std::size_t draw = 0; draw < 20; ++draw) {
    NormalStream normal(derive_seed(31, draw));
    spectral::SpectralField u(modes);
    for (std::size_t i = 0; i < modes; ++i) u.coeffs[i] = normal() / static_cast<double>(i + 1);
    const auto g = basis.synthesize(u);
    for (double r : {2.0, 4.0})
      for (double p : {4.0, 6.0})
        for (double t : {0.05, 0.5}) {
          const auto rep = spectral::smoothing_check(g, t, r, p);
          ++cases;
          worst = std::max(worst, rep.ratio);
          if (!rep.satisfied) ++violations;
        }
    const auto round = basis.analyze(g);
    double err = 0.0;
    for (std::size_t i = 0; i < modes; ++i) err = std::max(err, std::abs(round.coeffs[i] - u.coeffs[i]));
    if (err > 1e-10) out.expect(false, "round trip draw " + std::to_string(draw) + " err=" + fmt(err));
  }
  out.expect(violations == 0, "smoothing estimate: " + std::to_string(violations) + " violations in " +
                                  std::to_string(cases) + " cases, worst ratio " + fmt(worst));
  spectral::SpectralField u(modes);
  for (std::size_t i = 0; i < modes; ++i) u.coeffs[i] = 1.0 / static_cast<double>(i + 1);
  const auto two_step = spectral::semigroup_apply(spectral::semigroup_apply(u, 0.03), 0.07);
  const auto one_step = spectral::semigroup_apply(u, 0.1);
  double rel = 0.0;
  for (std::size_t i = 0; i < modes; ++i)
    if (one_step.coeffs[i] != 0.0)
      rel = std::max(rel, std::abs(two_step.coeffs[i] - one_step.coeffs[i]) / std::abs(one_step.coeffs[i]));
  out.expect(rel < 1e-14, "semigroup law rel err=" + fmt(rel));
  return out.take();
}

SuiteOutcome convolution_suite() {
  Outcome out("convolution");
  const fbm::HurstParam h(0.75);
  const fbm::TimeGrid grid(1.0, 256);
  const std::size_t paths = 20000;
  const auto z1 = parallel_map(paths, [&](std::size_t i) {
    const auto ens = noise::sample_modes(1, h, grid, derive_seed(41, i), noise::Sampler::circulant);
    const auto z = noise::stochastic_convolution(ens);
    return z.coeff(grid.n_steps(), 0);
  });
  const auto var = stats::sample_variance(z1);
  const double oracle = noise::mode_variance_oracle(1.0, h, 1.0, 400);
  out.expect(var.z_score(oracle) < 5.0,
             "mode-1 variance " + fmt(var.value) + " vs oracle " + fmt(oracle) + " z=" + fmt(var.z_score(oracle)));
  const double jb = stats::jarque_bera(z1);
  out.expect(stats::jarque_bera_p_value(jb) > 1e-3, "normality JB=" + fmt(jb));

  const auto ens = noise::sample_modes(8, h, grid, 43, noise::Sampler::circulant);
  const auto fast = noise::stochastic_convolution(ens);
  const auto slow = noise::reference::stochastic_convolution(ens);
  double err = 0.0;
  bool origin = true;
  for (std::size_t i = 0; i < 8; ++i) {
    if (fast.coeff(0, i) != 0.0) origin = false;
    for (std::size_t k = 0; k <= grid.n_steps(); ++k) err = std::max(err, std::abs(fast.coeff(k, i) - slow.coeff(k, i)));
  }
  out.expect(origin, "z(0) = 0");
  out.expect(err < 1e-12, "recursion vs direct sums err=" + fmt(err));
  return out.take();
}

SuiteOutcome solver_suite() {
  Outcome out("solver");
  RunConfig cfg;
  cfg.modes = 32;
  cfg.steps = 256;
  cfg.points = 1024;
  const auto spec = cfg.problem();
  out.expect(mild::check_hypotheses(spec).passed(), "default hypotheses hold");

  std::size_t h1_violations = 0;
  for (const auto& [p, alpha] : {std::pair{4.0, 1.0}, std::pair{6.0, 2.0}}) {
    mild::ProblemSpec s = spec;
    s.p = p;
    s.alpha = alpha;
    s.C = 1.0 + alpha;
    const spectral::Basis basis(16, 1024);
    for (std::size_t k = 0; k < 20; ++k) {
      NormalStream normal(derive_seed(51, k));
      spectral::SpectralField a(16), b(16);
      for (std::size_t i = 0; i < 16; ++i) {
        a.coeffs[i] = normal() / static_cast<double>(i + 1);
        b.coeffs[i] = normal() / static_cast<double>(i + 1);
      }
      if (!mild::check_h1(basis.synthesize(a), basis.synthesize(b), s).satisfied) ++h1_violations;
    }
  }
  out.expect(h1_violations == 0, "(h1) sweep violations: " + std::to_string(h1_violations));

  mild::ProblemSpec s = spec;
  s.C = 1.0;
  const double closed = mild::compute_T0(s, 1.0);
  const double bisect = mild::compute_T0_bisection(s, 1.0);
  out.expect(std::abs(closed - bisect) < 1e-10, "T0 closed form vs bisection: " + fmt(closed));

  const fbm::TimeGrid grid(cfg.horizon, cfg.steps);
  for (std::size_t path = 0; path < 2; ++path) {
    const auto z = noise::stochastic_convolution(noise::sample_modes(cfg.modes, spec.hurst, grid, derive_seed(61, path), cfg.sampler));
    try {
      const auto res = mild::picard_solve(spec, z);
      out.expect(res.trace.converged && res.trace.max_ratio <= res.trace.ctilde_T0 + 0.05,
                 "path " + std::to_string(path) + " converged in " + std::to_string(res.trace.iterations) +
                     " iterations, ratio " + fmt(res.trace.max_ratio) + ", Ctilde(T0) " + fmt(res.trace.ctilde_T0));
      mild::PicardOptions alt;
      alt.initial = mild::InitialIterate::constant_u0;
      const auto res2 = mild::picard_solve(spec, z, alt);
      const mild::MildOperator G(spec, z, res.solution.times);
      const double gap = G.sup_distance(res.solution, res2.solution);
      out.expect(gap < 1e-6, "path " + std::to_string(path) + " uniqueness gap " + fmt(gap));

      mild::ProblemSpec lin = spec;
      lin.C = 0.0;
      const auto linear = mild::picard_solve(lin, z);
      const mild::MildOperator L(lin, z, linear.solution.times);
      out.expect(linear.trace.iterations == 1 && L.sup_distance(linear.solution, L.linear_part()) <= 1e-12,
                 "path " + std::to_string(path) + " linear problem reproduced");
    } catch (const std::exception& e) {
      out.expect(false, "path " + std::to_string(path) + ": " + e.what());
    }
  }
  return out.take();
}

}  // namespace

std::vector<SuiteOutcome> validate(Suite suite) {
  std::vector<SuiteOutcome> results;
  if (suite == Suite::fbm || suite == Suite::all) results.push_back(fbm_suite());
  if (suite == Suite::kernel || suite == Suite::all) results.push_back(kernel_suite());
  if (suite == Suite::semigroup || suite == Suite::all) results.push_back(semigroup_suite());
  if (suite == Suite::convolution || suite == Suite::all) results.push_back(convolution_suite());
  if (suite == Suite::solver || suite == Suite::all) results.push_back(solver_suite());
  return results;
}

}  // namespace fracheat::harness
