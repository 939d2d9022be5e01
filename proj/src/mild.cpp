#include "fracheat/mild.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fracheat::mild {

using spectral::GridFunction;
using spectral::SpectralField;

double ProblemSpec::nonlinearity(double x) const {
  if (C == 0.0) return 0.0;
  if (f) return f(x);
  return x * std::pow(std::abs(x), alpha);
}

bool HypothesisReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.satisfied; });
}

HypothesisReport check_hypotheses(const ProblemSpec& spec) {
  const double H = spec.hurst.value();
  const double d = static_cast<double>(spec.dimension);
  HypothesisReport rep;
  rep.checks.push_back({"H > 1/2", H > 0.5, H, 0.5});
  rep.checks.push_back({"H > d/4", H > d / 4.0, H, d / 4.0});
  rep.checks.push_back({"pH >= 1", spec.p * H >= 1.0, spec.p * H, 1.0});
  rep.checks.push_back({"2p > alpha d", 2.0 * spec.p > spec.alpha * d, 2.0 * spec.p, spec.alpha * d});
  rep.checks.push_back({"m >= 1", spec.m() >= 1.0, spec.m(), 1.0});
  return rep;
}

GridFunction nonlinearity_apply(const GridFunction& g, double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("nonlinearity exponent must be positive");
  GridFunction out = g;
  for (double& v : out.values) v = v * std::pow(std::abs(v), alpha);
  return out;
}

namespace {

GridFunction apply_pointwise(const GridFunction& g, const ProblemSpec& spec) {
  GridFunction out = g;
  for (double& v : out.values) v = spec.nonlinearity(v);
  return out;
}

GridFunction difference(const GridFunction& a, const GridFunction& b) {
  if (a.values.size() != b.values.size()) throw std::invalid_argument("grid size mismatch");
  GridFunction out = a;
  for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= b.values[j];
  return out;
}

}  // namespace

InequalityReport check_h1(const GridFunction& u, const GridFunction& v, const ProblemSpec& spec) {
  const double m = spec.m();
  if (!(m >= 1.0)) throw std::domain_error("check_h1 requires m = p/(1+alpha) >= 1");
  InequalityReport rep;
  rep.lhs = spectral::lp_norm(difference(apply_pointwise(u, spec), apply_pointwise(v, spec)), m);
  rep.rhs = spec.C * spectral::lp_norm(difference(u, v), spec.p) *
            (std::pow(spectral::lp_norm(u, spec.p), spec.alpha) + std::pow(spectral::lp_norm(v, spec.p), spec.alpha));
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

double compute_K0(const GridFunction& u0, const noise::ConvolutionPath& z, double p) {
  const spectral::Basis basis(z.n_modes(), u0.intervals());
  return std::max(spectral::lp_norm(u0, p), noise::sup_lp_norm(z, basis, p));
}

double time_exponent(const ProblemSpec& spec) {
  const double e = 1.0 - static_cast<double>(spec.dimension) * spec.alpha / (2.0 * spec.p);
  if (!(e > 0.0)) throw std::domain_error("constants need 2p > alpha d");
  return e;
}

double k_factor(double K0, double alpha) {
  static const double threshold = std::log(3.0) / std::log(2.0);
  if (alpha >= threshold) return std::pow(6.0 * K0, alpha);
  return std::pow(3.0 * K0, alpha + 1.0);
}

double compute_Ctilde(double t, double K0, const ProblemSpec& spec) {
  if (!(t >= 0.0)) throw std::domain_error("Ctilde needs t >= 0");
  const double e = time_exponent(spec);
  return spec.C * std::pow(t, e) / e * k_factor(K0, spec.alpha);
}

double compute_T0(const ProblemSpec& spec, double K0) {
  const double T = spec.horizon;
  if (compute_Ctilde(T, K0, spec) < 1.0) return T;
  const double e = time_exponent(spec);
  const double root = std::pow(e / (spec.C * k_factor(K0, spec.alpha)), 1.0 / e);
  return std::min(root, T);
}

double compute_T0_bisection(const ProblemSpec& spec, double K0, double tol) {
  const double T = spec.horizon;
  if (compute_Ctilde(T, K0, spec) < 1.0) return T;
  double lo = 0.0, hi = T;
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (compute_Ctilde(mid, K0, spec) >= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<double> solver_nodes(const fbm::TimeGrid& grid, double T0) {
  if (!(T0 > 0.0) || T0 > grid.horizon() * (1.0 + 1e-12)) throw std::domain_error("T0 outside (0, T]");
  const double snap = 1e-12 * grid.horizon();
  std::vector<double> nodes;
  for (std::size_t k = 0; k <= grid.n_steps(); ++k) {
    const double t = grid.point(k);
    if (t > T0 + snap) break;
    nodes.push_back(t);
  }
  if (T0 - nodes.back() > snap) nodes.push_back(T0);
  return nodes;
}

// ---------------------------------------------------------------------------

MildOperator::MildOperator(const ProblemSpec& spec, const noise::ConvolutionPath& z, std::vector<double> nodes)
    : spec_(spec), basis_(z.n_modes(), spec.u0.intervals()) {
  if (nodes.empty() || nodes.front() != 0.0) throw std::invalid_argument("nodes must start at t = 0");
  if (!std::is_sorted(nodes.begin(), nodes.end())) throw std::invalid_argument("nodes must be increasing");
  const SpectralField u0 = basis_.analyze(spec.u0);
  linear_.states.reserve(nodes.size());
  for (double t : nodes) linear_.states.push_back(spectral::semigroup_apply(u0, t) + z.at_time(t));
  linear_.times = std::move(nodes);
}

Trajectory MildOperator::constant_initial() const {
  Trajectory out;
  out.times = linear_.times;
  out.states.assign(out.times.size(), basis_.analyze(spec_.u0));
  return out;
}

Trajectory MildOperator::apply(const Trajectory& u) const {
  const std::size_t K = linear_.times.size();
  if (u.times != linear_.times || u.states.size() != K) throw std::invalid_argument("trajectory nodes mismatch");
  if (spec_.nonlinearity_vanishes()) return linear_;

  const std::size_t N = basis_.n_modes();
  // Spectral coefficients of F(u(t_i)), i = 0..K-2 (left-point rule).
  std::vector<SpectralField> forcing(K > 0 ? K - 1 : 0);
  const long long count = static_cast<long long>(forcing.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    GridFunction g = basis_.synthesize(u.states[static_cast<std::size_t>(i)]);
    for (double& v : g.values) v = spec_.nonlinearity(v);
    forcing[static_cast<std::size_t>(i)] = basis_.analyze(g);
  }

  Trajectory out = linear_;
  // I_{k+1} = e^{-lambda h_k} I_k + (1 - e^{-lambda h_k}) / lambda F_k: the
  // exact integral of e^{-lambda(t-s)} over each step, F frozen at the left node.
  std::vector<double> acc(N, 0.0);
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const double h = linear_.times[k + 1] - linear_.times[k];
    for (std::size_t i = 0; i < N; ++i) {
      const double lambda = spectral::eigenvalue(i + 1);
      const double decay = std::exp(-lambda * h);
      acc[i] = decay * acc[i] + (-std::expm1(-lambda * h) / lambda) * forcing[k].coeffs[i];
      out.states[k + 1].coeffs[i] += acc[i];
    }
  }
  return out;
}

double MildOperator::norm(const SpectralField& u) const { return spectral::lp_norm(basis_.synthesize(u), spec_.p); }

double MildOperator::sup_norm(const Trajectory& u) const {
  double best = 0.0;
  for (const auto& s : u.states) best = std::max(best, norm(s));
  return best;
}

double MildOperator::sup_distance(const Trajectory& u, const Trajectory& v) const {
  if (u.states.size() != v.states.size()) throw std::invalid_argument("trajectory size mismatch");
  double best = 0.0;
  for (std::size_t k = 0; k < u.states.size(); ++k) best = std::max(best, norm(u.states[k] - v.states[k]));
  return best;
}

Trajectory apply_G(const Trajectory& u, const ProblemSpec& spec, const noise::ConvolutionPath& z) {
  return MildOperator(spec, z, u.times).apply(u);
}

// ---------------------------------------------------------------------------

PicardError::PicardError(Kind kind, const std::string& what, PicardTrace trace)
    : std::runtime_error(what), kind_(kind), trace_(std::move(trace)) {}

PicardTrace path_constants(const ProblemSpec& spec, const noise::ConvolutionPath& z) {
  PicardTrace tr;
  tr.K0 = compute_K0(spec.u0, z, spec.p);
  tr.T0 = compute_T0(spec, tr.K0);
  tr.ctilde_T = compute_Ctilde(spec.horizon, tr.K0, spec);
  tr.ctilde_T0 = compute_Ctilde(tr.T0, tr.K0, spec);
  const double e = time_exponent(spec);
  const double time_factor = spec.C * std::pow(tr.T0, e) / e;
  tr.cond1 = time_factor * std::pow(3.0 * tr.K0, spec.alpha + 1.0);
  tr.cond2 = time_factor * std::pow(6.0 * tr.K0, spec.alpha);
  tr.ball_radius = 3.0 * tr.K0;
  return tr;
}

PicardResult picard_solve(const ProblemSpec& spec, const noise::ConvolutionPath& z, const PicardOptions& options) {
  if (!check_hypotheses(spec).passed()) throw std::domain_error("problem violates the standing hypotheses");
  if (std::abs(z.grid().horizon() - spec.horizon) > 1e-12 * spec.horizon)
    throw std::invalid_argument("noise horizon differs from problem horizon");

  PicardTrace trace = path_constants(spec, z);
  const MildOperator G(spec, z, solver_nodes(z.grid(), trace.T0));
  trace.nodes = G.nodes().size();

  const double ball_limit = trace.ball_radius * (1.0 + options.ball_slack) + 1e-12;
  const double noise_floor = 1e-12 * std::max(1.0, trace.ball_radius);

  Trajectory u = options.initial == InitialIterate::linear_part ? G.linear_part() : G.constant_initial();
  double previous_diff = 0.0;
  for (std::size_t it = 1; it <= options.max_iters; ++it) {
    Trajectory next = G.apply(u);
    IterationRecord rec;
    rec.sup_norm = G.sup_norm(next);
    rec.sup_diff = G.sup_distance(next, u);
    if (it > 1 && previous_diff > 1e3 * noise_floor) {
      rec.ratio = rec.sup_diff / previous_diff;
      trace.max_ratio = std::max(trace.max_ratio, rec.ratio);
    }
    trace.history.push_back(rec);
    trace.iterations = it;
    previous_diff = rec.sup_diff;
    u = std::move(next);
    for (const auto& s : u.states) s.check_finite();

    if (rec.sup_norm > ball_limit)
      throw PicardError(PicardError::Kind::left_ball,
                        "Picard iterate left the 3 K0 ball (norm " + std::to_string(rec.sup_norm) + ", radius " +
                            std::to_string(trace.ball_radius) + ")",
                        trace);
    if (rec.sup_diff < options.tol) {
      trace.converged = true;
      return {std::move(u), std::move(trace)};
    }
  }
  throw PicardError(PicardError::Kind::no_convergence,
                    "Picard iteration did not converge in " + std::to_string(options.max_iters) + " iterations",
                    trace);
}

}  // namespace fracheat::mild
