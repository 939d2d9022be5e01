#pragma once

#include <span>
#include <vector>

// Small sample-statistics toolkit used by the validation suites.
namespace fracheat::stats {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;

  /// |value - target| measured in standard errors.
  double z_score(double target) const;
};

double mean(std::span<const double> x);
Estimate sample_variance(std::span<const double> x);
Estimate sample_covariance(std::span<const double> x, std::span<const double> y);

/// Jarque-Bera statistic; asymptotically chi-square with 2 degrees of freedom.
double jarque_bera(std::span<const double> x);
double jarque_bera_p_value(double statistic);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov law.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Linear-interpolation quantile (Hyndman-Fan type 7). Empty input yields 0.
double quantile(std::vector<double> x, double q);

}  // namespace fracheat::stats
