#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracheat/fbm.hpp"
#include "fracheat/noise.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/rng.hpp"
#include "fracheat/stats.hpp"
#include "oracles.hpp"

using namespace fracheat;
using fbm::HurstParam;
using fbm::TimeGrid;

namespace {

bool within_ulps(double a, double b, int ulps) {
  double x = a;
  for (int i = 0; i < ulps; ++i) x = std::nextafter(x, b);
  return x == b;
}

}  // namespace

TEST_CASE("Hurst parameter range", "[fbm]") {
  CHECK_THROWS_AS(HurstParam(0.5), std::domain_error);
  CHECK_THROWS_AS(HurstParam(1.0), std::domain_error);
  CHECK_NOTHROW(HurstParam(0.51));
  CHECK(HurstParam::with_brownian_endpoint(0.5).is_brownian());
  CHECK_THROWS_AS(HurstParam::with_brownian_endpoint(0.4), std::domain_error);
}

TEST_CASE("covariance examples", "[fbm][covariance]") {
  const auto bm = HurstParam::with_brownian_endpoint(0.5);
  CHECK(fbm::covariance(bm, 1.0, 2.0) == Catch::Approx(1.0).epsilon(1e-15));
  const HurstParam h(0.75);
  CHECK(fbm::covariance(h, 2.0, 2.0) == std::pow(2.0, 1.5));
  CHECK(fbm::covariance(h, 1.0, 2.0) == Catch::Approx(0.5 * std::pow(2.0, 1.5)).epsilon(1e-15));
  CHECK(fbm::covariance(h, 1.0, 2.0) == Catch::Approx(1.414214).margin(1e-6));
  CHECK_THROWS_AS(fbm::covariance(h, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(fbm::covariance(h, 1.0, -1e-9), std::domain_error);
}

TEST_CASE("covariance invariants", "[fbm][covariance][property]") {
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> time(0.0, 3.0), hurst(0.501, 0.999), scale(0.1, 10.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const HurstParam h(hurst(eng));
    const double s = time(eng), t = time(eng), c = scale(eng);
    const double two_h = 2.0 * h.value();
    CHECK(fbm::covariance(h, s, t) == fbm::covariance(h, t, s));
    CHECK(within_ulps(fbm::covariance(h, t, t), std::pow(t, two_h), 4));
    const double r = fbm::covariance(h, s, t);
    const double rc = fbm::covariance(h, c * s, c * t);
    CHECK(std::abs(rc - std::pow(c, two_h) * r) <= 1e-12 * std::max(std::abs(rc), 1e-300) + 1e-300);
    // E[(b(t) - b(s))^2] from the covariance.
    const double incr = fbm::covariance(h, t, t) + fbm::covariance(h, s, s) - 2.0 * r;
    const double expect = std::pow(std::abs(t - s), two_h);
    CHECK(std::abs(incr - expect) <= 1e-12 * std::max(1.0, fbm::covariance(h, t, t) + fbm::covariance(h, s, s)));
  }
}

TEST_CASE("c_H against an independent Gamma evaluation", "[fbm][kernel]") {
  for (double H : {0.55, 0.6, 0.75, 0.9, 0.95})
    CHECK(fbm::c_h_constant(HurstParam(H)) == Catch::Approx(oracle::c_h(H)).epsilon(1e-12));
  // Frozen from the Gamma oracle.
  CHECK(fbm::c_h_constant(HurstParam(0.75)) == Catch::Approx(0.2674111587579976).epsilon(1e-12));
  CHECK(fbm::c_h_constant(HurstParam(0.5001)) < 0.05);
  const double c9 = fbm::c_h_constant(HurstParam(0.9));
  CHECK(c9 > 0.0);
  CHECK(std::isfinite(c9));
  CHECK_THROWS_AS(fbm::c_h_constant(HurstParam::with_brownian_endpoint(0.5)), std::domain_error);
}

TEST_CASE("kernel K_H values and domain", "[fbm][kernel]") {
  const HurstParam h(0.75);
  // Reference computed by adaptive quadrature of the raw integrand.
  CHECK(fbm::kernel_kh(h, 1.0, 0.5, 10000) == Catch::Approx(0.9375919636268257).epsilon(1e-8));
  // Near the diagonal K_H(t,s) ~ c_H (t-s)^{H-1/2} / (H-1/2): it vanishes, slowly.
  CHECK(fbm::kernel_kh(h, 1.0, 0.999, 10000) == Catch::Approx(0.19022222162990304).epsilon(1e-6));
  CHECK(fbm::kernel_kh(h, 1.0, 1.0 - 1e-8, 10000) < 0.05);
  double previous = INFINITY;
  for (double gap : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const double k = fbm::kernel_kh(h, 1.0, 1.0 - gap, 4096);
    CHECK(k < previous);
    previous = k;
  }
  CHECK_THROWS_AS(fbm::kernel_kh(h, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(fbm::kernel_kh(h, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(fbm::kernel_kh(h, 0.5, 0.7), std::domain_error);
}

TEST_CASE("kernel is positive", "[fbm][kernel][property]") {
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const HurstParam h(0.51 + 0.48 * u(eng));
    const double t = 0.01 + u(eng);
    const double s = t * (0.001 + 0.998 * u(eng));
    CHECK(fbm::kernel_kh(h, t, s, 512) > 0.0);
  }
}

TEST_CASE("transfer operator on indicators", "[fbm][kernel]") {
  const HurstParam h(0.75);
  CHECK(fbm::transfer_indicator(h, 0.5, 0.7) == 0.0);
  CHECK(fbm::transfer_indicator(h, 1.0, 0.5) == fbm::kernel_kh(h, 1.0, 0.5));
  // Isometry: int_0^t (K_H^* 1_[0,t])(s)^2 ds = t^{2H}.
  CHECK(fbm::kernel_product_integral(h, 0.7, 0.7) == Catch::Approx(std::pow(0.7, 1.5)).margin(1e-3));
}

TEST_CASE("kernel factorization reproduces the covariance", "[fbm][kernel]") {
  for (double H : {0.6, 0.75, 0.9}) {
    const HurstParam h(H);
    for (auto [s, t] : {std::pair{0.2, 0.9}, std::pair{0.5, 0.5}, std::pair{1.0, 0.4}}) {
      INFO("H=" << H << " s=" << s << " t=" << t);
      CHECK(std::abs(fbm::kernel_product_integral(h, t, s) - fbm::covariance(h, s, t)) < 1e-3);
    }
  }
}

TEST_CASE("Cholesky sampler: determinism and starting point", "[fbm][sampler]") {
  const HurstParam h(0.75);
  const TimeGrid grid(1.0, 64);
  const auto a = fbm::sample_fbm_cholesky(h, grid, 99);
  const auto b = fbm::sample_fbm_cholesky(h, grid, 99);
  CHECK(a.values == b.values);
  CHECK(a.values.front() == 0.0);
  CHECK(a.values.size() == 65);
  CHECK(fbm::sample_fbm_cholesky(h, grid, 100).values != a.values);
  CHECK_THROWS_AS(fbm::CholeskyFactor(h, grid, 1e-6), std::invalid_argument);
}

TEST_CASE("Cholesky sampler: Brownian increments are white", "[fbm][sampler]") {
  const auto bm = HurstParam::with_brownian_endpoint(0.5);
  const TimeGrid grid(1.0, 8);
  const fbm::CholeskyFactor factor(bm, grid);
  const std::size_t paths = 10000;
  const auto samples = parallel_map(paths, [&](std::size_t i) { return factor.sample(derive_seed(5, i)).values; });
  const double dt = grid.dt();
  for (std::size_t a = 0; a < 8; ++a)
    for (std::size_t b = a; b < 8; ++b) {
      std::vector<double> x(paths), y(paths);
      for (std::size_t i = 0; i < paths; ++i) {
        x[i] = samples[i][a + 1] - samples[i][a];
        y[i] = samples[i][b + 1] - samples[i][b];
      }
      const auto est = stats::sample_covariance(x, y);
      INFO("increments " << a << ", " << b);
      CHECK(est.z_score(a == b ? dt : 0.0) < 5.0);
    }
}

TEST_CASE("Cholesky sampler matches the covariance", "[fbm][sampler]") {
  const HurstParam h(0.75);
  const TimeGrid grid(1.0, 64);
  const fbm::CholeskyFactor factor(h, grid);
  const std::size_t paths = 20000;
  const auto samples = parallel_map(paths, [&](std::size_t i) { return factor.sample(derive_seed(6, i)).values; });
  std::vector<double> x(paths), y(paths);
  for (std::size_t i = 0; i < paths; ++i) {
    x[i] = samples[i][16];
    y[i] = samples[i][48];
  }
  CHECK(stats::sample_covariance(x, y).z_score(fbm::covariance(h, 0.25, 0.75)) < 5.0);
}

TEST_CASE("circulant sampler agrees in law with Cholesky", "[fbm][sampler]") {
  for (double H : {0.6, 0.75, 0.9}) {
    const HurstParam h(H);
    const TimeGrid grid(1.0, 64);
    const fbm::CholeskyFactor chol(h, grid);
    const fbm::CirculantFactor circ(h, grid);
    CHECK_FALSE(circ.uses_fallback());
    const std::size_t n = 10000;
    const auto a = parallel_map(n, [&](std::size_t i) { return circ.sample(derive_seed(7, i)).values.back(); });
    const auto b = parallel_map(n, [&](std::size_t i) { return chol.sample(derive_seed(8, i)).values.back(); });
    INFO("H=" << H);
    CHECK(stats::ks_two_sample(a, b).p_value > 1e-3);
  }
}

TEST_CASE("circulant sampler: Brownian variance, determinism, no fallback", "[fbm][sampler]") {
  const auto bm = HurstParam::with_brownian_endpoint(0.5);
  const TimeGrid grid(2.0, 16);
  const fbm::CirculantFactor circ(bm, grid);
  std::vector<double> incr;
  for (std::size_t i = 0; i < 2000; ++i) {
    const auto path = circ.sample(derive_seed(9, i));
    for (std::size_t k = 0; k < 16; ++k) incr.push_back(path.values[k + 1] - path.values[k]);
  }
  // Increments within one path are independent for H = 1/2, so pooling is fine.
  CHECK(stats::sample_variance(incr).z_score(grid.dt()) < 5.0);

  const HurstParam h(0.8);
  const TimeGrid g(1.0, 100);
  CHECK(fbm::sample_fbm_circulant(h, g, 3).values == fbm::sample_fbm_circulant(h, g, 3).values);
  CHECK(fbm::sample_fbm_circulant(h, g, 3).values.front() == 0.0);
  for (double H : {0.51, 0.7, 0.99})
    for (std::size_t n : {2u, 7u, 512u, 4096u}) CHECK_FALSE(fbm::CirculantFactor(HurstParam(H), TimeGrid(1.0, n)).uses_fallback());
  CHECK_THROWS_AS(fbm::CirculantFactor(h, TimeGrid(1.0, 1)), std::invalid_argument);
}

TEST_CASE("Young integral basics", "[fbm][young]") {
  const HurstParam h(0.7);
  const TimeGrid grid(1.0, 128);
  const auto path = fbm::sample_fbm_circulant(h, grid, 12);
  const std::vector<double> ones(129, 1.0), zeros(129, 0.0);
  CHECK(fbm::young_integral(ones, path) == Catch::Approx(path.values.back()).margin(1e-14));
  CHECK(fbm::young_integral(zeros, path) == 0.0);
  CHECK_THROWS_AS(fbm::young_integral(std::vector<double>(128, 1.0), path), std::invalid_argument);
  // Linear in the integrand.
  std::vector<double> phi(129), psi(129), mix(129);
  for (std::size_t k = 0; k <= 128; ++k) {
    phi[k] = std::sin(3.0 * grid.point(k));
    psi[k] = grid.point(k) * grid.point(k);
    mix[k] = 2.0 * phi[k] - 0.5 * psi[k];
  }
  CHECK(fbm::young_integral(mix, path) ==
        Catch::Approx(2.0 * fbm::young_integral(phi, path) - 0.5 * fbm::young_integral(psi, path)).margin(1e-13));
}

TEST_CASE("Young integral variance matches the double-integral oracle", "[fbm][young]") {
  const HurstParam h(0.75);
  const TimeGrid grid(1.0, 512);
  const fbm::CirculantFactor circ(h, grid);
  std::vector<double> phi(513);
  for (std::size_t k = 0; k <= 512; ++k) phi[k] = std::exp(-(1.0 - grid.point(k)));
  const auto values = parallel_map(100000, [&](std::size_t i) { return fbm::young_integral(phi, circ.sample(derive_seed(13, i))); });
  const double target = noise::mode_variance_oracle(1.0, h, 1.0, 2000);
  CHECK(target == Catch::Approx(oracle::mode_variance_1d(1.0, 0.75, 1.0)).epsilon(1e-9));
  CHECK(stats::sample_variance(values).z_score(target) < 5.0);
}
