#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracheat/fbm.hpp"
#include "fracheat/noise.hpp"
#include "fracheat/spectral.hpp"

// Local mild solutions of du = (Laplacian u + F(u)) dt + dB^H on (0, pi) with
// Dirichlet boundary, by Picard iteration of
//   G[u](t) = S(t) u0 + int_0^t S(t-s) F(u(s)) ds + z(t).
namespace fracheat::mild {

/// Problem data. `f` defaults to x |x|^alpha when empty; C = 0 forces F = 0.
struct ProblemSpec {
  fbm::HurstParam hurst{0.75};
  double p = 2.0;
  double alpha = 1.0;
  double C = 2.0;
  double horizon = 1.0;
  spectral::GridFunction u0;
  std::size_t dimension = 1;
  std::function<double(double)> f;

  double m() const noexcept { return p / (1.0 + alpha); }
  double nonlinearity(double x) const;
  bool nonlinearity_vanishes() const noexcept { return C == 0.0; }
};

struct Check {
  std::string name;
  bool satisfied = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct HypothesisReport {
  std::vector<Check> checks;
  bool passed() const;
};

/// H > 1/2, H > d/4, pH >= 1, 2p > alpha d, m >= 1. Never throws.
HypothesisReport check_hypotheses(const ProblemSpec& spec);

/// Pointwise x |x|^alpha.
spectral::GridFunction nonlinearity_apply(const spectral::GridFunction& g, double alpha);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// ||F(u) - F(v)||_m <= C ||u - v||_p (||u||_p^alpha + ||v||_p^alpha), m = p/(1+alpha) >= 1.
InequalityReport check_h1(const spectral::GridFunction& u, const spectral::GridFunction& v, const ProblemSpec& spec);

/// max(||u0||_p, sup_k ||z(t_k)||_p), with z synthesized on u0's grid.
double compute_K0(const spectral::GridFunction& u0, const noise::ConvolutionPath& z, double p);

/// 1 - d alpha / (2p); positive under 2p > alpha d.
double time_exponent(const ProblemSpec& spec);
/// (6 K0)^alpha when alpha >= ln 3 / ln 2, else (3 K0)^{alpha+1}.
double k_factor(double K0, double alpha);
/// C t^e / e times k_factor(K0, alpha), e = time_exponent(spec).
double compute_Ctilde(double t, double K0, const ProblemSpec& spec);
/// T if Ctilde(T) < 1, else the root of Ctilde(t) = 1 in closed form.
double compute_T0(const ProblemSpec& spec, double K0);
/// Same stopping time by bisection on Ctilde(t) >= 1.
double compute_T0_bisection(const ProblemSpec& spec, double K0, double tol = 1e-13);

/// Time-indexed field in the spectral basis; times[0] = 0.
struct Trajectory {
  std::vector<double> times;
  std::vector<spectral::SpectralField> states;

  std::size_t size() const noexcept { return times.size(); }
};

/// Grid nodes of z up to T0, with T0 appended when it falls between nodes.
std::vector<double> solver_nodes(const fbm::TimeGrid& grid, double T0);

/// G bound to one problem, one noise path and one set of nodes. Precomputes
/// the linear part S(t_k) u0 + z(t_k).
class MildOperator {
 public:
  MildOperator(const ProblemSpec& spec, const noise::ConvolutionPath& z, std::vector<double> nodes);

  Trajectory apply(const Trajectory& u) const;
  /// S(t_k) u0 + z(t_k).
  const Trajectory& linear_part() const noexcept { return linear_; }
  /// P_N u0 at every node.
  Trajectory constant_initial() const;

  double sup_norm(const Trajectory& u) const;
  double sup_distance(const Trajectory& u, const Trajectory& v) const;
  double norm(const spectral::SpectralField& u) const;

  const spectral::Basis& basis() const noexcept { return basis_; }
  const std::vector<double>& nodes() const noexcept { return linear_.times; }

 private:
  ProblemSpec spec_;
  spectral::Basis basis_;
  Trajectory linear_;
};

/// One application of G on u's own nodes.
Trajectory apply_G(const Trajectory& u, const ProblemSpec& spec, const noise::ConvolutionPath& z);

struct IterationRecord {
  double sup_norm = 0.0;   // sup_t ||u_{k+1}(t)||_p
  double sup_diff = 0.0;   // sup_t ||u_{k+1} - u_k||_p
  double ratio = 0.0;      // sup_diff / previous sup_diff, 0 when undefined
};

struct PicardTrace {
  double K0 = 0.0;
  double T0 = 0.0;
  double ctilde_T = 0.0;
  double ctilde_T0 = 0.0;
  double cond1 = 0.0;  // C T0^e / e (3 K0)^{alpha+1}
  double cond2 = 0.0;  // C T0^e / e (6 K0)^alpha
  double ball_radius = 0.0;
  std::size_t nodes = 0;
  std::size_t iterations = 0;
  bool converged = false;
  double max_ratio = 0.0;  // over iterations with differences above round-off
  std::vector<IterationRecord> history;
};

enum class InitialIterate { linear_part, constant_u0 };

struct PicardOptions {
  double tol = 1e-8;
  std::size_t max_iters = 200;
  double ball_slack = 0.02;  // relative to the 3 K0 radius
  InitialIterate initial = InitialIterate::linear_part;
};

class PicardError : public std::runtime_error {
 public:
  enum class Kind { no_convergence, left_ball };
  PicardError(Kind kind, const std::string& what, PicardTrace trace);
  Kind kind() const noexcept { return kind_; }
  const PicardTrace& trace() const noexcept { return trace_; }

 private:
  Kind kind_;
  PicardTrace trace_;
};

struct PicardResult {
  Trajectory solution;
  PicardTrace trace;
};

/// Constants for one noise path, without iterating.
PicardTrace path_constants(const ProblemSpec& spec, const noise::ConvolutionPath& z);

PicardResult picard_solve(const ProblemSpec& spec, const noise::ConvolutionPath& z, const PicardOptions& options = {});

}  // namespace fracheat::mild
