#include "fracheat/fbm.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "fracheat/quadrature.hpp"
#include "fracheat/rng.hpp"

namespace fracheat::fbm {

namespace {

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");
}

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

std::shared_ptr<void> make_forward_plan(std::size_t n) {
  FftwBuffer in(n), out(n);
  std::lock_guard lock(fftw_planner_mutex());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD,
                                    FFTW_ESTIMATE);
  if (plan == nullptr) throw std::runtime_error("FFTW planning failed");
  return {static_cast<void*>(plan), [](void* p) {
            std::lock_guard guard(fftw_planner_mutex());
            fftw_destroy_plan(static_cast<fftw_plan>(p));
          }};
}

// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double two_h, std::size_t k) {
  if (k == 0) return 1.0;
  const double kd = static_cast<double>(k);
  return 0.5 * (std::pow(kd + 1.0, two_h) - 2.0 * std::pow(kd, two_h) + std::pow(kd - 1.0, two_h));
}

}  // namespace

HurstParam::HurstParam(double value) : value_(value) {
  if (!(value > 0.5 && value < 1.0))
    throw std::domain_error("Hurst parameter must lie in (1/2, 1), got " + std::to_string(value));
}

HurstParam HurstParam::with_brownian_endpoint(double value) {
  if (!(value >= 0.5 && value < 1.0))
    throw std::domain_error("Hurst parameter must lie in [1/2, 1), got " + std::to_string(value));
  return HurstParam(value, Unchecked{});
}

TimeGrid::TimeGrid(double horizon, std::size_t n_steps) : horizon_(horizon), n_steps_(n_steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("horizon must be positive");
  if (n_steps == 0) throw std::invalid_argument("time grid needs at least one step");
}

std::vector<double> TimeGrid::points() const {
  std::vector<double> t(n_steps_ + 1);
  for (std::size_t k = 0; k <= n_steps_; ++k) t[k] = point(k);
  return t;
}

FactorizationError::FactorizationError(std::size_t pivot, double value)
    : std::runtime_error("covariance matrix not positive definite at pivot " + std::to_string(pivot) +
                         " (value " + std::to_string(value) + ")"),
      pivot_(pivot) {}

double covariance(HurstParam h, double s, double t) {
  require_nonnegative_time(s);
  require_nonnegative_time(t);
  const double two_h = 2.0 * h.value();
  if (s == t) return std::pow(t, two_h);
  return 0.5 * (std::pow(t, two_h) + std::pow(s, two_h) - std::pow(std::abs(t - s), two_h));
}

double c_h_constant(HurstParam h) {
  const double H = h.value();
  if (!(H > 0.5 && H < 1.0)) throw std::domain_error("c_H requires 1/2 < H < 1");
  const double a = 2.0 - 2.0 * H;
  const double b = H - 0.5;
  const double beta = std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
  return std::sqrt(H * (2.0 * H - 1.0) / beta);
}

double kernel_kh(HurstParam h, double t, double s, std::size_t quad_steps) {
  if (!(s > 0.0) || !(s < t)) throw std::domain_error("kernel_kh requires 0 < s < t");
  const double H = h.value();
  const double a = H - 0.5;
  if (!(a > 0.0)) throw std::domain_error("kernel_kh requires H > 1/2");
  const double inv_a = 1.0 / a;
  const double upper = std::pow(t - s, a);
  const double integral = quadrature::composite_gauss(
      [s, a, inv_a](double v) { return std::pow(s + std::pow(v, inv_a), a); }, 0.0, upper, quad_steps);
  return c_h_constant(h) * std::pow(s, -a) * integral * inv_a;
}

double transfer_indicator(HurstParam h, double t, double s, std::size_t quad_steps) {
  if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("transfer_indicator requires s, t > 0");
  if (s >= t) return 0.0;
  return kernel_kh(h, t, s, quad_steps);
}

double kernel_product_integral(HurstParam h, double t, double s, std::size_t outer_steps,
                               std::size_t inner_steps) {
  if (!(s > 0.0) || !(t > 0.0)) throw std::domain_error("kernel_product_integral requires s, t > 0");
  const double H = h.value();
  const double m = std::min(s, t);
  const double q = 1.0 / (2.0 - 2.0 * H);
  auto integrand = [&](double y) {
    if (y <= 0.0 || y >= 1.0) return 0.0;
    const double u = m * std::pow(y, q);
    if (!(u > 0.0) || !(u < m)) return 0.0;
    const double jac = m * q * std::pow(y, q - 1.0);
    return kernel_kh(h, t, u, inner_steps) * kernel_kh(h, s, u, inner_steps) * jac;
  };
  return quadrature::composite_gauss(integrand, 0.0, 1.0, outer_steps);
}

// ---------------------------------------------------------------------------

CholeskyFactor::CholeskyFactor(HurstParam h, const TimeGrid& grid, double diagonal_jitter)
    : hurst_(h), grid_(grid) {
  if (diagonal_jitter < 0.0 || diagonal_jitter > 1e-12)
    throw std::invalid_argument("diagonal jitter must lie in [0, 1e-12]");
  const std::size_t n = grid.n_steps();
  lower_.assign(n * (n + 1) / 2, 0.0);
  auto row = [](std::size_t i) { return i * (i + 1) / 2; };
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = grid.point(i + 1);
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = covariance(h, grid.point(j + 1), ti);
      if (i == j) sum += diagonal_jitter;
      const double* li = &lower_[row(i)];
      const double* lj = &lower_[row(j)];
      for (std::size_t k = 0; k < j; ++k) sum -= li[k] * lj[k];
      if (i == j) {
        if (!(sum > 0.0)) throw FactorizationError(i, sum);
        lower_[row(i) + i] = std::sqrt(sum);
      } else {
        lower_[row(i) + j] = sum / lj[j];
      }
    }
  }
}

void CholeskyFactor::sample_into(std::uint64_t seed, std::span<double> out) const {
  const std::size_t n = grid_.n_steps();
  if (out.size() != n + 1) throw std::invalid_argument("output size must be n_steps + 1");
  std::vector<double> xi(n);
  NormalStream(seed).fill(xi);
  out[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = &lower_[i * (i + 1) / 2];
    double v = 0.0;
    for (std::size_t k = 0; k <= i; ++k) v += li[k] * xi[k];
    out[i + 1] = v;
  }
}

FbmPath CholeskyFactor::sample(std::uint64_t seed) const {
  FbmPath path{grid_, hurst_, seed, std::vector<double>(grid_.n_steps() + 1), false};
  sample_into(seed, path.values);
  return path;
}

CirculantFactor::CirculantFactor(HurstParam h, const TimeGrid& grid) : hurst_(h), grid_(grid) {
  const std::size_t n = grid.n_steps();
  if (n < 2) throw std::invalid_argument("circulant sampler needs at least two steps");
  const std::size_t m = 2 * n;
  const double two_h = 2.0 * h.value();
  plan_ = make_forward_plan(m);

  FftwBuffer row(m), eig(m);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t lag = k <= n ? k : m - k;
    row.data[k][0] = fgn_autocovariance(two_h, lag);
    row.data[k][1] = 0.0;
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan_.get()), row.data, eig.data);

  sqrt_eigen_.resize(m);
  bool negative = false;
  for (std::size_t k = 0; k < m; ++k) {
    const double lambda = eig.data[k][0];
    if (lambda < 0.0) negative = true;
    sqrt_eigen_[k] = std::sqrt(std::max(lambda, 0.0) / static_cast<double>(m));
  }
  if (negative) fallback_ = std::make_shared<const CholeskyFactor>(h, grid);
}

void CirculantFactor::sample_into(std::uint64_t seed, std::span<double> out) const {
  const std::size_t n = grid_.n_steps();
  if (out.size() != n + 1) throw std::invalid_argument("output size must be n_steps + 1");
  if (fallback_) {
    fallback_->sample_into(seed, out);
    return;
  }
  const std::size_t m = 2 * n;
  FftwBuffer in(m), spectrum(m);
  NormalStream normal(seed);
  for (std::size_t k = 0; k < m; ++k) {
    in.data[k][0] = sqrt_eigen_[k] * normal();
    in.data[k][1] = sqrt_eigen_[k] * normal();
  }
  fftw_execute_dft(static_cast<fftw_plan>(plan_.get()), in.data, spectrum.data);
  // Real parts of the first n outputs are unit-step fGn; rescale by dt^H.
  const double scale = std::pow(grid_.dt(), hurst_.value());
  out[0] = 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += scale * spectrum.data[k][0];
    out[k + 1] = acc;
  }
}

FbmPath CirculantFactor::sample(std::uint64_t seed) const {
  FbmPath path{grid_, hurst_, seed, std::vector<double>(grid_.n_steps() + 1), uses_fallback()};
  sample_into(seed, path.values);
  return path;
}

FbmPath sample_fbm_cholesky(HurstParam h, const TimeGrid& grid, std::uint64_t seed) {
  return CholeskyFactor(h, grid).sample(seed);
}

FbmPath sample_fbm_circulant(HurstParam h, const TimeGrid& grid, std::uint64_t seed) {
  return CirculantFactor(h, grid).sample(seed);
}

double young_integral(std::span<const double> phi, const FbmPath& path) {
  if (phi.size() != path.values.size())
    throw std::invalid_argument("integrand length must match the path grid");
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < path.values.size(); ++k)
    sum += phi[k] * (path.values[k + 1] - path.values[k]);
  return sum;
}

}  // namespace fracheat::fbm
