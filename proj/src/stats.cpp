#include "fracheat/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracheat::stats {

double Estimate::z_score(double target) const {
  if (std_error == 0.0) return value == target ? 0.0 : INFINITY;
  return std::abs(value - target) / std_error;
}

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

Estimate sample_covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("sample size mismatch");
  if (x.size() < 2) throw std::invalid_argument("need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = mean(x);
  const double my = mean(y);
  // Products of centred values; their sample mean and spread give the estimate
  // and its standard error.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - mx) * (y[i] - my);
  const double cov = s / (n - 1.0);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = (x[i] - mx) * (y[i] - my) - s / n;
    ss += d * d;
  }
  return {cov, std::sqrt(ss / (n - 1.0) / n)};
}

Estimate sample_variance(std::span<const double> x) { return sample_covariance(x, x); }

double jarque_bera(std::span<const double> x) {
  if (x.size() < 4) throw std::invalid_argument("need at least four samples");
  const double n = static_cast<double>(x.size());
  const double m = mean(x);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - m;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  return n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
}

double jarque_bera_p_value(double statistic) { return std::exp(-0.5 * statistic); }

namespace {

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  return {d, kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)};
}

double quantile(std::vector<double> x, double q) {
  if (x.empty()) return 0.0;
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile level outside [0,1]");
  std::sort(x.begin(), x.end());
  const double h = q * static_cast<double>(x.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

}  // namespace fracheat::stats
