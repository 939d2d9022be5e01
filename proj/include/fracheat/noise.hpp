#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fracheat/fbm.hpp"
#include "fracheat/spectral.hpp"

// Truncated cylindrical fBm B^H(t) = sum_n e_n b_n^H(t) and the stochastic
// convolution z(t) = int_0^t S(t-s) dB^H(s).
namespace fracheat::noise {

enum class Sampler { cholesky, circulant };

/// One scalar fBm per mode. Mode n (1-based) is driven by
/// derive_seed(master_seed, n), so ensembles of different sizes share modes.
struct ModeEnsemble {
  fbm::TimeGrid grid;
  fbm::HurstParam hurst;
  std::uint64_t master_seed = 0;
  std::vector<fbm::FbmPath> paths;

  std::size_t n_modes() const noexcept { return paths.size(); }
};

std::uint64_t mode_seed(std::uint64_t master_seed, std::size_t mode);

ModeEnsemble sample_modes(std::size_t n_modes, fbm::HurstParam h, const fbm::TimeGrid& grid,
                          std::uint64_t master_seed, Sampler sampler);

/// Ensemble of identically zero paths, for exercising the deterministic parts.
ModeEnsemble zero_ensemble(std::size_t n_modes, fbm::HurstParam h, const fbm::TimeGrid& grid);

/// z(t_k) for k = 0..n, plus the driving increments so z can be advanced to
/// off-grid times.
class ConvolutionPath {
 public:
  ConvolutionPath(fbm::TimeGrid grid, std::size_t n_modes);

  const fbm::TimeGrid& grid() const noexcept { return grid_; }
  std::size_t n_modes() const noexcept { return n_modes_; }

  double coeff(std::size_t k, std::size_t mode_index) const { return coeffs_[k * n_modes_ + mode_index]; }
  double& coeff(std::size_t k, std::size_t mode_index) { return coeffs_[k * n_modes_ + mode_index]; }
  double increment(std::size_t k, std::size_t mode_index) const { return increments_[k * n_modes_ + mode_index]; }
  double& increment(std::size_t k, std::size_t mode_index) { return increments_[k * n_modes_ + mode_index]; }

  spectral::SpectralField at(std::size_t k) const;

  /// z(t) for t in [0, T]. Off-grid times take a partial exponential step from
  /// the preceding node with the increment linearly interpolated.
  spectral::SpectralField at_time(double t) const;

  /// Keeps modes 1..n_modes.
  ConvolutionPath truncated(std::size_t n_modes) const;

  ConvolutionPath& operator+=(const ConvolutionPath& other);
  ConvolutionPath& operator*=(double s);

 private:
  fbm::TimeGrid grid_;
  std::size_t n_modes_;
  std::vector<double> coeffs_;      // (n+1) x N
  std::vector<double> increments_;  // n x N
};

ConvolutionPath operator+(ConvolutionPath a, const ConvolutionPath& b);

/// Per-mode recursion z_n(t_{k+1}) = e^{-lambda_n dt} (z_n(t_k) + db_{n,k}),
/// algebraically equal to the left-point Young sum. Parallel over modes.
/// Optional `weights` (length N) colour the noise mode by mode.
ConvolutionPath stochastic_convolution(const ModeEnsemble& ens, std::span<const double> weights = {});

/// alpha_H int_0^t int_0^t e^{-lambda(t-u)} e^{-lambda(t-v)} |u-v|^{2H-2} du dv.
///
/// Split at u = v; on the triangle, r = u - v = w^{1/(2H-1)} absorbs the
/// diagonal singularity and leaves 2H int_0^t int_0^{u^{2H-1}} (smooth) dw du.
/// `quad_steps` Gauss-Legendre nodes per axis.
double mode_variance_oracle(double lambda, fbm::HurstParam h, double t, std::size_t quad_steps = 2000);

/// ||z(t_k)||_p for every node.
std::vector<double> lp_norm_series(const ConvolutionPath& z, const spectral::Basis& basis, double p);
double sup_lp_norm(const ConvolutionPath& z, const spectral::Basis& basis, double p);

struct TailDiagnosticParams {
  std::size_t n_modes = 64;
  fbm::HurstParam hurst{0.75};
  fbm::TimeGrid grid{1.0, 512};
  std::uint64_t master_seed = 0;
  Sampler sampler = Sampler::circulant;
  std::size_t intervals = 4096;
};

/// sup_t ||z_{2N}(t) - z_N(t)||_p / sup_t ||z_N(t)||_p on shared seeds: the
/// relative size of the modes added by doubling the truncation. Zero when the
/// noise vanishes.
double tail_diagnostic(const TailDiagnosticParams& params, double p);
/// Same diagnostic from an already-sampled 2N-mode ensemble.
double tail_diagnostic(const ModeEnsemble& doubled, std::size_t intervals, double p);

namespace reference {
// Direct O(N n^2) left-point sums sum_{i<k} e^{-lambda_n (t_k - t_i)} db_{n,i}.
ConvolutionPath stochastic_convolution(const ModeEnsemble& ens, std::span<const double> weights = {});
}  // namespace reference

}  // namespace fracheat::noise
