#include "fracheat/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracheat::spectral {

namespace {

const double kNorm = std::sqrt(2.0 / std::numbers::pi);

// sin(n j pi / M) with the argument reduced exactly in integers, so boundary
// and symmetric nodes come out exact.
double grid_sine(std::size_t n, std::size_t j, std::size_t intervals) {
  const std::size_t period = 2 * intervals;
  const std::size_t r = (n % period) * (j % period) % period;
  if (r == 0 || r == intervals) return 0.0;
  return std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(intervals));
}

void require_resolution(std::size_t n_modes, std::size_t intervals) {
  if (n_modes == 0) throw std::invalid_argument("need at least one mode");
  if (intervals < 2 * n_modes)
    throw std::invalid_argument("grid too coarse: need M >= 2 N (M=" + std::to_string(intervals) +
                                ", N=" + std::to_string(n_modes) + ")");
}

double trapezoid_weight(std::size_t j, std::size_t intervals) {
  const double h = std::numbers::pi / static_cast<double>(intervals);
  return (j == 0 || j == intervals) ? 0.5 * h : h;
}

}  // namespace

double eigenvalue(std::size_t n) {
  if (n == 0) throw std::invalid_argument("mode index starts at 1");
  const double d = static_cast<double>(n);
  return d * d;
}

double eigenfunction(std::size_t n, double x) {
  if (n == 0) throw std::invalid_argument("mode index starts at 1");
  if (!(x >= 0.0 && x <= std::numbers::pi)) throw std::domain_error("x outside [0, pi]");
  return kNorm * std::sin(static_cast<double>(n) * x);
}

void SpectralField::check_finite() const {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw std::runtime_error("non-finite spectral coefficient");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  if (other.n_modes() != n_modes()) throw std::invalid_argument("mode count mismatch");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  if (other.n_modes() != n_modes()) throw std::invalid_argument("mode count mismatch");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= other.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (double& c : coeffs) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

GridFunction::GridFunction(std::vector<double> v) : values(std::move(v)) {
  if (values.size() < 2) throw std::invalid_argument("grid function needs at least one interval");
  if (values.front() != 0.0 || values.back() != 0.0)
    throw std::invalid_argument("grid function must vanish at the Dirichlet boundary");
}

double GridFunction::x(std::size_t j) const {
  return std::numbers::pi * static_cast<double>(j) / static_cast<double>(intervals());
}

SpectralField semigroup_apply(const SpectralField& u, double t) {
  if (!(t >= 0.0)) throw std::domain_error("semigroup time must be nonnegative");
  SpectralField out = u;
  if (t == 0.0) return out;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= std::exp(-eigenvalue(i + 1) * t);
  return out;
}

Basis::Basis(std::size_t n_modes, std::size_t intervals) : n_modes_(n_modes), intervals_(intervals) {
  require_resolution(n_modes, intervals);
  table_.resize(n_modes * (intervals + 1));
#pragma omp parallel for schedule(static)
  for (std::size_t n = 1; n <= n_modes; ++n)
    for (std::size_t j = 0; j <= intervals; ++j)
      table_[(n - 1) * (intervals + 1) + j] = kNorm * grid_sine(n, j, intervals);
}

GridFunction Basis::synthesize(const SpectralField& u) const {
  if (u.n_modes() != n_modes_) throw std::invalid_argument("mode count does not match basis");
  GridFunction g(intervals_);
  const std::size_t stride = intervals_ + 1;
  const long long inner = static_cast<long long>(intervals_);
#pragma omp parallel for schedule(static)
  for (long long jj = 1; jj < inner; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    double v = 0.0;
    for (std::size_t i = 0; i < n_modes_; ++i) v += u.coeffs[i] * table_[i * stride + j];
    g.values[j] = v;
  }
  return g;
}

SpectralField Basis::analyze(const GridFunction& g) const {
  if (g.intervals() != intervals_) throw std::invalid_argument("grid size does not match basis");
  SpectralField u(n_modes_);
  const std::size_t stride = intervals_ + 1;
  const double h = std::numbers::pi / static_cast<double>(intervals_);
  const long long modes = static_cast<long long>(n_modes_);
#pragma omp parallel for schedule(static)
  for (long long ii = 0; ii < modes; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    // Endpoint terms vanish for both factors, so interior nodes carry weight h.
    double v = 0.0;
    for (std::size_t j = 1; j < intervals_; ++j) v += g.values[j] * table_[i * stride + j];
    u.coeffs[i] = h * v;
  }
  return u;
}

GridFunction synthesize(const SpectralField& u, std::size_t intervals) {
  return Basis(u.n_modes(), intervals).synthesize(u);
}

SpectralField analyze(const GridFunction& g, std::size_t n_modes) {
  return Basis(n_modes, g.intervals()).analyze(g);
}

double lp_norm(const GridFunction& g, double p) {
  if (!(p >= 1.0)) throw std::domain_error("L^p norm needs p >= 1");
  const std::size_t m = g.intervals();
  if (m == 0) return 0.0;
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t j = 0; j <= m; ++j) sum += trapezoid_weight(j, m) * g.values[j] * g.values[j];
    return std::sqrt(sum);
  }
  for (std::size_t j = 0; j <= m; ++j) sum += trapezoid_weight(j, m) * std::pow(std::abs(g.values[j]), p);
  return std::pow(sum, 1.0 / p);
}

SmoothingReport smoothing_check(const GridFunction& u, double t, double r, double p) {
  if (!(t > 0.0)) throw std::domain_error("smoothing check needs t > 0");
  if (!(r > 1.0) || !(r <= p)) throw std::invalid_argument("smoothing check needs 1 < r <= p");
  const std::size_t m = u.intervals();
  const Basis basis(m / 2, m);
  const GridFunction evolved = basis.synthesize(semigroup_apply(basis.analyze(u), t));
  SmoothingReport rep;
  rep.lhs = lp_norm(evolved, p);
  rep.rhs = std::pow(t, -0.5 * (1.0 / r - 1.0 / p)) * lp_norm(u, r);
  rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
  rep.satisfied = rep.lhs <= rep.rhs;
  return rep;
}

namespace reference {

GridFunction synthesize(const SpectralField& u, std::size_t intervals) {
  require_resolution(u.n_modes(), intervals);
  GridFunction g(intervals);
  for (std::size_t j = 1; j < intervals; ++j) {
    const double x = g.x(j);
    double v = 0.0;
    for (std::size_t i = 0; i < u.n_modes(); ++i) v += u.coeffs[i] * eigenfunction(i + 1, x);
    g.values[j] = v;
  }
  return g;
}

SpectralField analyze(const GridFunction& g, std::size_t n_modes) {
  const std::size_t m = g.intervals();
  require_resolution(n_modes, m);
  SpectralField u(n_modes);
  for (std::size_t i = 0; i < n_modes; ++i) {
    double v = 0.0;
    for (std::size_t j = 0; j <= m; ++j) v += trapezoid_weight(j, m) * g.values[j] * eigenfunction(i + 1, g.x(j));
    u.coeffs[i] = v;
  }
  return u;
}

}  // namespace reference

}  // namespace fracheat::spectral
