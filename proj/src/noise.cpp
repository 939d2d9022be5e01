#include "fracheat/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "fracheat/quadrature.hpp"
#include "fracheat/rng.hpp"

namespace fracheat::noise {

using spectral::SpectralField;

std::uint64_t mode_seed(std::uint64_t master_seed, std::size_t mode) { return derive_seed(master_seed, mode); }

ModeEnsemble sample_modes(std::size_t n_modes, fbm::HurstParam h, const fbm::TimeGrid& grid,
                          std::uint64_t master_seed, Sampler sampler) {
  if (n_modes == 0) throw std::invalid_argument("need at least one mode");
  ModeEnsemble ens{grid, h, master_seed, {}};
  ens.paths.resize(n_modes, fbm::FbmPath{grid, h, 0, {}, false});

  using Factor = std::variant<fbm::CholeskyFactor, fbm::CirculantFactor>;
  const Factor factor = sampler == Sampler::cholesky ? Factor{fbm::CholeskyFactor(h, grid)}
                                                     : Factor{fbm::CirculantFactor(h, grid)};
  const long long count = static_cast<long long>(n_modes);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    const std::uint64_t seed = mode_seed(master_seed, static_cast<std::size_t>(i) + 1);
    ens.paths[static_cast<std::size_t>(i)] = std::visit([seed](const auto& f) { return f.sample(seed); }, factor);
  }
  return ens;
}

ModeEnsemble zero_ensemble(std::size_t n_modes, fbm::HurstParam h, const fbm::TimeGrid& grid) {
  ModeEnsemble ens{grid, h, 0, {}};
  ens.paths.assign(n_modes, fbm::FbmPath{grid, h, 0, std::vector<double>(grid.n_steps() + 1, 0.0), false});
  return ens;
}

ConvolutionPath::ConvolutionPath(fbm::TimeGrid grid, std::size_t n_modes)
    : grid_(grid),
      n_modes_(n_modes),
      coeffs_((grid.n_steps() + 1) * n_modes, 0.0),
      increments_(grid.n_steps() * n_modes, 0.0) {
  if (n_modes == 0) throw std::invalid_argument("need at least one mode");
}

SpectralField ConvolutionPath::at(std::size_t k) const {
  if (k > grid_.n_steps()) throw std::out_of_range("time index beyond grid");
  const auto first = coeffs_.begin() + static_cast<std::ptrdiff_t>(k * n_modes_);
  return SpectralField(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(n_modes_)));
}

SpectralField ConvolutionPath::at_time(double t) const {
  const double horizon = grid_.horizon();
  if (!(t >= 0.0) || t > horizon * (1.0 + 1e-12)) throw std::domain_error("time outside [0, T]");
  const double dt = grid_.dt();
  const std::size_t n = grid_.n_steps();
  auto k = static_cast<std::size_t>(std::floor(t / dt));
  if (k >= n) return at(n);
  const double delta = t - grid_.point(k);
  if (delta <= 1e-14 * horizon) return at(k);
  const double theta = delta / dt;
  SpectralField out(n_modes_);
  for (std::size_t i = 0; i < n_modes_; ++i) {
    const double decay = std::exp(-spectral::eigenvalue(i + 1) * delta);
    out.coeffs[i] = decay * (coeff(k, i) + theta * increment(k, i));
  }
  return out;
}

ConvolutionPath ConvolutionPath::truncated(std::size_t n_modes) const {
  if (n_modes == 0 || n_modes > n_modes_) throw std::invalid_argument("invalid truncation");
  ConvolutionPath out(grid_, n_modes);
  for (std::size_t k = 0; k <= grid_.n_steps(); ++k)
    for (std::size_t i = 0; i < n_modes; ++i) out.coeff(k, i) = coeff(k, i);
  for (std::size_t k = 0; k < grid_.n_steps(); ++k)
    for (std::size_t i = 0; i < n_modes; ++i) out.increment(k, i) = increment(k, i);
  return out;
}

ConvolutionPath& ConvolutionPath::operator+=(const ConvolutionPath& other) {
  if (!(other.grid_ == grid_) || other.n_modes_ != n_modes_) throw std::invalid_argument("incompatible paths");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  for (std::size_t i = 0; i < increments_.size(); ++i) increments_[i] += other.increments_[i];
  return *this;
}

ConvolutionPath& ConvolutionPath::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  for (double& c : increments_) c *= s;
  return *this;
}

ConvolutionPath operator+(ConvolutionPath a, const ConvolutionPath& b) { return a += b; }

namespace {

void check_ensemble(const ModeEnsemble& ens, std::span<const double> weights) {
  if (ens.paths.empty()) throw std::invalid_argument("empty ensemble");
  if (!weights.empty() && weights.size() != ens.paths.size())
    throw std::invalid_argument("weight vector must have one entry per mode");
  for (const auto& p : ens.paths)
    if (!(p.grid == ens.grid) || p.values.size() != ens.grid.n_steps() + 1)
      throw std::invalid_argument("ensemble paths must share the ensemble grid");
}

}  // namespace

ConvolutionPath stochastic_convolution(const ModeEnsemble& ens, std::span<const double> weights) {
  check_ensemble(ens, weights);
  const std::size_t n_modes = ens.n_modes();
  const std::size_t n = ens.grid.n_steps();
  const double dt = ens.grid.dt();
  ConvolutionPath z(ens.grid, n_modes);
  const long long count = static_cast<long long>(n_modes);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < count; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double w = weights.empty() ? 1.0 : weights[i];
    const double decay = std::exp(-spectral::eigenvalue(i + 1) * dt);
    const auto& b = ens.paths[i].values;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double db = w * (b[k + 1] - b[k]);
      z.increment(k, i) = db;
      acc = decay * (acc + db);
      z.coeff(k + 1, i) = acc;
    }
  }
  return z;
}

double mode_variance_oracle(double lambda, fbm::HurstParam h, double t, std::size_t quad_steps) {
  if (!(lambda > 0.0)) throw std::domain_error("mode variance needs lambda > 0");
  if (!(t > 0.0)) throw std::domain_error("mode variance needs t > 0");
  const double H = h.value();
  if (!(H > 0.5)) throw std::domain_error("mode variance oracle needs H > 1/2");
  // u = t y^kappa, r = u omega^kappa with kappa = 1/(2H-1); then
  // u^{2H-1} du = kappa t^{2H} y^kappa dy and the integrand is smooth on [0,1]^2.
  const double kappa = 1.0 / (2.0 * H - 1.0);
  auto inner = [&](double y) {
    const double u = t * std::pow(y, kappa);
    const double outer_weight = std::pow(y, kappa) * std::exp(-lambda * (t - u));
    const double g = quadrature::composite_gauss(
        [&](double omega) { return std::exp(-lambda * (t - u + u * std::pow(omega, kappa))); }, 0.0, 1.0,
        quad_steps);
    return outer_weight * g;
  };
  const double integral = quadrature::composite_gauss(inner, 0.0, 1.0, quad_steps);
  return 2.0 * H * kappa * std::pow(t, 2.0 * H) * integral;
}

std::vector<double> lp_norm_series(const ConvolutionPath& z, const spectral::Basis& basis, double p) {
  if (basis.n_modes() != z.n_modes()) throw std::invalid_argument("basis does not match path modes");
  const std::size_t nodes = z.grid().n_steps() + 1;
  std::vector<double> norms(nodes);
  const long long count = static_cast<long long>(nodes);
#pragma omp parallel for schedule(static)
  for (long long k = 0; k < count; ++k)
    norms[static_cast<std::size_t>(k)] = spectral::lp_norm(basis.synthesize(z.at(static_cast<std::size_t>(k))), p);
  return norms;
}

double sup_lp_norm(const ConvolutionPath& z, const spectral::Basis& basis, double p) {
  const auto norms = lp_norm_series(z, basis, p);
  return *std::max_element(norms.begin(), norms.end());
}

double tail_diagnostic(const ModeEnsemble& doubled, std::size_t intervals, double p) {
  const std::size_t n2 = doubled.n_modes();
  if (n2 < 2 || n2 % 2 != 0) throw std::invalid_argument("tail diagnostic needs an even number of modes");
  const ConvolutionPath full = stochastic_convolution(doubled);
  const std::size_t n1 = n2 / 2;
  const ConvolutionPath half = full.truncated(n1);
  // Difference field: modes n1+1..n2 only.
  ConvolutionPath tail = full;
  for (std::size_t k = 0; k <= full.grid().n_steps(); ++k)
    for (std::size_t i = 0; i < n1; ++i) tail.coeff(k, i) = 0.0;
  const double base = sup_lp_norm(half, spectral::Basis(n1, intervals), p);
  const double delta = sup_lp_norm(tail, spectral::Basis(n2, intervals), p);
  if (base == 0.0) return delta == 0.0 ? 0.0 : INFINITY;
  return delta / base;
}

double tail_diagnostic(const TailDiagnosticParams& params, double p) {
  const ModeEnsemble doubled =
      sample_modes(2 * params.n_modes, params.hurst, params.grid, params.master_seed, params.sampler);
  return tail_diagnostic(doubled, params.intervals, p);
}

namespace reference {

ConvolutionPath stochastic_convolution(const ModeEnsemble& ens, std::span<const double> weights) {
  check_ensemble(ens, weights);
  const std::size_t n = ens.grid.n_steps();
  ConvolutionPath z(ens.grid, ens.n_modes());
  for (std::size_t i = 0; i < ens.n_modes(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const double lambda = spectral::eigenvalue(i + 1);
    const auto& b = ens.paths[i].values;
    for (std::size_t k = 0; k < n; ++k) z.increment(k, i) = w * (b[k + 1] - b[k]);
    for (std::size_t k = 1; k <= n; ++k) {
      const double tk = ens.grid.point(k);
      double sum = 0.0;
      for (std::size_t j = 0; j < k; ++j) sum += std::exp(-lambda * (tk - ens.grid.point(j))) * z.increment(j, i);
      z.coeff(k, i) = sum;
    }
  }
  return z;
}

}  // namespace reference

}  // namespace fracheat::noise
