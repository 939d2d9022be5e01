#pragma once

// Test-only oracles. Nothing here calls into the library's numerical paths.

#include <cmath>
#include <cstddef>
#include <numbers>

namespace oracle {

/// Lanczos approximation (g = 7, n = 9), with reflection for x < 1/2.
inline double gamma(double x) {
  static const double c[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma(1.0 - x));
  x -= 1.0;
  double a = c[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += c[i] / (x + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

inline double beta(double a, double b) { return gamma(a) * gamma(b) / gamma(a + b); }

inline double c_h(double H) { return std::sqrt(H * (2.0 * H - 1.0) / beta(2.0 - 2.0 * H, H - 0.5)); }

/// Composite Simpson on [a, b] with an even number of intervals.
template <class F>
double simpson(F&& f, double a, double b, std::size_t intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / static_cast<double>(intervals);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  return s * h / 3.0;
}

/// Mode variance through the one-dimensional lag reduction
///   2 H(2H-1) int_0^t r^{2H-2} e^{-lambda r} (1 - e^{-2 lambda (t-r)}) / (2 lambda) dr,
/// with r = w^{1/(2H-1)} to remove the singularity, then Simpson.
inline double mode_variance_1d(double lambda, double H, double t, std::size_t intervals = 200000) {
  const double k = 1.0 / (2.0 * H - 1.0);
  auto g = [&](double w) {
    const double r = std::pow(w, k);
    return std::exp(-lambda * r) * (-std::expm1(-2.0 * lambda * (t - r))) / (2.0 * lambda);
  };
  return 2.0 * H * simpson(g, 0.0, std::pow(t, 2.0 * H - 1.0), intervals);
}

/// Brownian (H = 1/2) limit of the mode variance.
inline double ou_variance(double lambda, double t) { return -std::expm1(-2.0 * lambda * t) / (2.0 * lambda); }

}  // namespace oracle
