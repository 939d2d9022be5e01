#pragma once

#include <cstddef>
#include <vector>

// Dirichlet Laplacian on U = (0, pi): eigenpairs lambda_n = n^2,
// e_n(x) = sqrt(2/pi) sin(n x), n >= 1.
namespace fracheat::spectral {

double eigenvalue(std::size_t n);
double eigenfunction(std::size_t n, double x);

/// Coefficients on e_1..e_N; coeffs[i] belongs to mode n = i + 1.
struct SpectralField {
  std::vector<double> coeffs;

  SpectralField() = default;
  explicit SpectralField(std::size_t n_modes) : coeffs(n_modes, 0.0) {}
  explicit SpectralField(std::vector<double> c) : coeffs(std::move(c)) {}

  std::size_t n_modes() const noexcept { return coeffs.size(); }
  /// Throws if any coefficient is NaN or infinite.
  void check_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Samples at x_j = j pi / M, j = 0..M, with zero boundary values.
struct GridFunction {
  std::vector<double> values;

  GridFunction() = default;
  explicit GridFunction(std::size_t intervals) : values(intervals + 1, 0.0) {}
  explicit GridFunction(std::vector<double> v);

  std::size_t intervals() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  double x(std::size_t j) const;
};

/// Coefficientwise c_n -> exp(-n^2 t) c_n.
SpectralField semigroup_apply(const SpectralField& u, double t);

/// Eigenfunction table at the grid nodes for fixed (N, M). Shared read-only.
///
/// synthesize parallelizes over grid points, analyze over modes. Each output
/// entry is a fixed-order sum, so results do not depend on the thread count.
class Basis {
 public:
  Basis(std::size_t n_modes, std::size_t intervals);

  std::size_t n_modes() const noexcept { return n_modes_; }
  std::size_t intervals() const noexcept { return intervals_; }

  GridFunction synthesize(const SpectralField& u) const;
  /// Trapezoid projection onto e_1..e_N.
  SpectralField analyze(const GridFunction& g) const;

  /// e_n(x_j), n = 1..N.
  double at(std::size_t n, std::size_t j) const noexcept { return table_[(n - 1) * (intervals_ + 1) + j]; }

 private:
  std::size_t n_modes_;
  std::size_t intervals_;
  std::vector<double> table_;
};

/// Convenience wrappers; they build a Basis per call.
GridFunction synthesize(const SpectralField& u, std::size_t intervals);
SpectralField analyze(const GridFunction& g, std::size_t n_modes);

/// Trapezoid-weighted discrete L^p norm, p >= 1.
double lp_norm(const GridFunction& g, double p);

struct SmoothingReport {
  double lhs = 0.0;    // ||S(t) u||_p
  double rhs = 0.0;    // t^{-(1/2)(1/r - 1/p)} ||u||_r
  double ratio = 0.0;  // lhs / rhs
  bool satisfied = false;
};

/// Evaluates both sides of ||S(t)u||_p <= t^{-(d/2)(1/r-1/p)} ||u||_r with d = 1
/// and constant 1. Requires 1 < r <= p and t > 0.
SmoothingReport smoothing_check(const GridFunction& u, double t, double r, double p);

namespace reference {
// Serial evaluation straight from eigenfunction(); no table, no threads.
GridFunction synthesize(const SpectralField& u, std::size_t intervals);
SpectralField analyze(const GridFunction& g, std::size_t n_modes);
}  // namespace reference

}  // namespace fracheat::spectral
