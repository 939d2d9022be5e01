#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

// One-dimensional fractional Brownian motion with Hurst index H > 1/2.
namespace fracheat::fbm {

/// Hurst index. The regular constructor accepts the open interval (1/2, 1);
/// `with_brownian_endpoint` additionally admits H = 1/2 so that samplers and
/// the covariance can be checked against ordinary Brownian motion.
class HurstParam {
 public:
  explicit HurstParam(double value);
  static HurstParam with_brownian_endpoint(double value);

  double value() const noexcept { return value_; }
  bool is_brownian() const noexcept { return value_ == 0.5; }

 private:
  struct Unchecked {};
  HurstParam(double value, Unchecked) noexcept : value_(value) {}
  double value_;
};

/// Uniform grid t_k = k T / n on [0, T].
class TimeGrid {
 public:
  TimeGrid(double horizon, std::size_t n_steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(n_steps_); }
  double point(std::size_t k) const noexcept {
    return k == n_steps_ ? horizon_ : horizon_ * static_cast<double>(k) / static_cast<double>(n_steps_);
  }
  std::vector<double> points() const;

  bool operator==(const TimeGrid&) const = default;

 private:
  double horizon_;
  std::size_t n_steps_;
};

struct FbmPath {
  TimeGrid grid;
  HurstParam hurst;
  std::uint64_t seed = 0;
  std::vector<double> values;  // values[k] = b^H(t_k), values[0] = 0
  bool sampler_fallback = false;  // circulant embedding failed over to Cholesky
};

/// Thrown when the covariance matrix is not numerically positive definite.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(std::size_t pivot, double value);
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

/// R_H(t,s) = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
///
/// The exponent 2H applies to |t-s| alone. Raising the whole bracket to 2H
/// would break R(t,t) = t^{2H} and positive definiteness.
double covariance(HurstParam h, double s, double t);

/// c_H = (H(2H-1) / B(2-2H, H-1/2))^{1/2}; requires 1/2 < H < 1.
double c_h_constant(HurstParam h);

/// Volterra kernel K_H(t,s) = c_H s^{1/2-H} int_s^t (u-s)^{H-3/2} u^{H-1/2} du, 0 < s < t.
///
/// The endpoint singularity is removed with u = s + v^{1/(H-1/2)}, which turns
/// the integral into (H-1/2)^{-1} int_0^{(t-s)^{H-1/2}} (s + v^{1/(H-1/2)})^{H-1/2} dv.
/// The smooth remainder is integrated by composite 16-point Gauss-Legendre
/// with roughly `quad_steps` nodes.
double kernel_kh(HurstParam h, double t, double s, std::size_t quad_steps = 4096);

/// (K_H^* 1_{[0,t]})(s): K_H(t,s) on s < t, zero otherwise.
double transfer_indicator(HurstParam h, double t, double s, std::size_t quad_steps = 4096);

/// int_0^{min(s,t)} K_H(t,u) K_H(s,u) du.
///
/// The u^{1-2H} blow-up at the origin is absorbed by u = m y^{1/(2-2H)},
/// m = min(s,t). `outer_steps` nodes in y, `inner_steps` per kernel value.
double kernel_product_integral(HurstParam h, double t, double s, std::size_t outer_steps = 2048,
                               std::size_t inner_steps = 512);

/// Lower-triangular factor of the covariance matrix at t_1..t_n.
/// Built once per (H, grid) and shared read-only across samples.
class CholeskyFactor {
 public:
  CholeskyFactor(HurstParam h, const TimeGrid& grid, double diagonal_jitter = 0.0);

  FbmPath sample(std::uint64_t seed) const;
  /// Writes b^H(t_0..t_n) into out (size n+1).
  void sample_into(std::uint64_t seed, std::span<double> out) const;

  HurstParam hurst() const noexcept { return hurst_; }
  const TimeGrid& grid() const noexcept { return grid_; }

 private:
  HurstParam hurst_;
  TimeGrid grid_;
  std::vector<double> lower_;  // packed row-major lower triangle
};

/// Davies-Harte circulant embedding of fractional Gaussian noise.
/// Falls back to an internal CholeskyFactor if the embedding has a negative
/// eigenvalue; samples then carry `sampler_fallback = true`.
class CirculantFactor {
 public:
  CirculantFactor(HurstParam h, const TimeGrid& grid);

  FbmPath sample(std::uint64_t seed) const;
  void sample_into(std::uint64_t seed, std::span<double> out) const;

  bool uses_fallback() const noexcept { return fallback_ != nullptr; }
  HurstParam hurst() const noexcept { return hurst_; }
  const TimeGrid& grid() const noexcept { return grid_; }

 private:
  HurstParam hurst_;
  TimeGrid grid_;
  std::vector<double> sqrt_eigen_;  // sqrt(lambda_k / 2n)
  std::shared_ptr<void> plan_;      // forward FFT of length 2n, executed on caller buffers
  std::shared_ptr<const CholeskyFactor> fallback_;
};

FbmPath sample_fbm_cholesky(HurstParam h, const TimeGrid& grid, std::uint64_t seed);
FbmPath sample_fbm_circulant(HurstParam h, const TimeGrid& grid, std::uint64_t seed);

/// Left-point Riemann-Stieltjes sum sum_k phi(t_k) (b(t_{k+1}) - b(t_k)).
double young_integral(std::span<const double> phi, const FbmPath& path);

}  // namespace fracheat::fbm
