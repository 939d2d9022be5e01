#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fracheat/rng.hpp"
#include "fracheat/spectral.hpp"

using namespace fracheat;
using namespace fracheat::spectral;

namespace {

SpectralField random_field(std::size_t modes, std::uint64_t seed, double decay = 1.0) {
  NormalStream normal(seed);
  SpectralField u(modes);
  for (std::size_t i = 0; i < modes; ++i) u.coeffs[i] = normal() / std::pow(static_cast<double>(i + 1), decay);
  return u;
}

double l2(const SpectralField& u) {
  double s = 0.0;
  for (double c : u.coeffs) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("eigenpairs", "[spectral]") {
  CHECK(eigenvalue(1) == 1.0);
  CHECK(eigenvalue(3) == 9.0);
  for (std::size_t n = 1; n < 100; ++n) CHECK(eigenvalue(n) < eigenvalue(n + 1));
  CHECK(eigenfunction(1, std::numbers::pi / 2) == Catch::Approx(std::sqrt(2.0 / std::numbers::pi)));
  CHECK(eigenfunction(1, std::numbers::pi / 2) == Catch::Approx(0.797885).margin(1e-6));
  CHECK(std::abs(eigenfunction(2, std::numbers::pi / 2)) < 1e-15);
  CHECK_THROWS_AS(eigenfunction(1, -0.1), std::domain_error);
  CHECK_THROWS_AS(eigenfunction(1, 3.2), std::domain_error);
  CHECK_THROWS(eigenvalue(0));
}

TEST_CASE("eigenfunctions are normalized under the trapezoid rule", "[spectral]") {
  const Basis basis(8, 4096);
  for (std::size_t n = 1; n <= 8; ++n) {
    SpectralField u(8);
    u.coeffs[n - 1] = 1.0;
    CHECK(lp_norm(basis.synthesize(u), 2.0) == Catch::Approx(1.0).margin(1e-6));
  }
}

TEST_CASE("semigroup action", "[spectral][semigroup]") {
  SpectralField e1(4);
  e1.coeffs[0] = 1.0;
  CHECK(semigroup_apply(e1, 1.0).coeffs[0] == Catch::Approx(0.367879).margin(1e-6));
  const auto u = random_field(16, 1);
  CHECK(semigroup_apply(u, 0.0).coeffs == u.coeffs);
  CHECK_THROWS_AS(semigroup_apply(u, -1e-3), std::domain_error);
  for (double t : {0.01, 0.1, 1.0}) CHECK(l2(semigroup_apply(u, t)) <= l2(u));
}

TEST_CASE("semigroup law and monotone decay", "[spectral][semigroup][property]") {
  std::mt19937_64 eng(2);
  std::uniform_real_distribution<double> time(0.0, 0.5);
  std::uniform_int_distribution<int> ticks(0, 1 << 12);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_field(32, 100 + trial);
    {
      // Dyadic times: lambda s, lambda t and s + t are exact, so only the
      // exponentials and products round.
      const double s = std::ldexp(ticks(eng), -14), t = std::ldexp(ticks(eng), -14);
      const auto a = semigroup_apply(semigroup_apply(u, s), t);
      const auto b = semigroup_apply(u, s + t);
      for (std::size_t i = 0; i < 32; ++i) {
        if (std::abs(b.coeffs[i]) < 1e-250) continue;
        CHECK(std::abs(a.coeffs[i] - b.coeffs[i]) <= 4.0 * eps * std::abs(b.coeffs[i]));
      }
    }
    {
      // General times: rounding of s + t is amplified by lambda (s + t).
      const double s = time(eng), t = time(eng);
      const auto a = semigroup_apply(semigroup_apply(u, s), t);
      const auto b = semigroup_apply(u, s + t);
      for (std::size_t i = 0; i < 32; ++i) {
        if (std::abs(b.coeffs[i]) < 1e-250) continue;
        const double cond = eigenvalue(i + 1) * (s + t);
        CHECK(std::abs(a.coeffs[i] - b.coeffs[i]) <= (4.0 + 2.0 * cond) * eps * std::abs(b.coeffs[i]));
      }
      CHECK(l2(semigroup_apply(u, s + t)) <= l2(semigroup_apply(u, std::min(s, t))));
    }
  }
}

TEST_CASE("synthesis and analysis", "[spectral]") {
  const Basis basis(4, 8);
  SpectralField zero(4);
  for (double v : basis.synthesize(zero).values) CHECK(v == 0.0);
  CHECK(basis.analyze(GridFunction(8)).coeffs == std::vector<double>(4, 0.0));

  SpectralField e1(4);
  e1.coeffs[0] = 1.0;
  const auto g = basis.synthesize(e1);
  for (std::size_t j = 0; j <= 8; ++j)
    CHECK(g.values[j] == Catch::Approx(std::sqrt(2.0 / std::numbers::pi) * std::sin(g.x(j))).margin(1e-15));
  CHECK(g.values.front() == 0.0);
  CHECK(g.values.back() == 0.0);

  CHECK_THROWS_AS(Basis(5, 8), std::invalid_argument);
  CHECK_THROWS_AS(synthesize(SpectralField(5), 8), std::invalid_argument);
  CHECK_THROWS_AS(analyze(GridFunction(8), 5), std::invalid_argument);
}

TEST_CASE("analysis inverts synthesis under the anti-aliasing condition", "[spectral][property]") {
  for (auto [modes, intervals] : {std::pair<std::size_t, std::size_t>{4, 8}, {32, 64}, {64, 4096}, {100, 256}}) {
    const Basis basis(modes, intervals);
    for (int draw = 0; draw < 5; ++draw) {
      const auto u = random_field(modes, 7 * draw + modes, 0.0);
      const auto back = basis.analyze(basis.synthesize(u));
      for (std::size_t i = 0; i < modes; ++i) CHECK(std::abs(back.coeffs[i] - u.coeffs[i]) < 1e-10);
    }
  }
  // A single mode survives projection onto more modes.
  const Basis wide(2048, 4096);
  SpectralField e3(2048);
  e3.coeffs[2] = 1.0;
  const auto back = wide.analyze(Basis(2048, 4096).synthesize(e3));
  for (std::size_t i = 0; i < 2048; ++i) CHECK(std::abs(back.coeffs[i] - (i == 2 ? 1.0 : 0.0)) <= 1e-10);
}

TEST_CASE("L^p norms", "[spectral][norm]") {
  GridFunction zero(4096);
  CHECK(lp_norm(zero, 3.0) == 0.0);
  GridFunction s(4096);
  for (std::size_t j = 0; j <= 4096; ++j) s.values[j] = std::sin(s.x(j));
  s.values.back() = 0.0;
  // int_0^pi sin^4 = 3 pi / 8.
  CHECK(lp_norm(s, 4.0) == Catch::Approx(std::pow(3.0 * std::numbers::pi / 8.0, 0.25)).margin(1e-5));
  CHECK(lp_norm(s, 4.0) == Catch::Approx(1.041826).margin(1e-5));
  CHECK_THROWS_AS(lp_norm(s, 0.5), std::domain_error);
  CHECK_THROWS_AS(GridFunction(std::vector<double>{0.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("L^p triangle inequality", "[spectral][norm][property]") {
  const Basis basis(16, 512);
  for (int draw = 0; draw < 50; ++draw) {
    const auto a = basis.synthesize(random_field(16, 2 * draw));
    const auto b = basis.synthesize(random_field(16, 2 * draw + 1));
    GridFunction sum = a;
    for (std::size_t j = 0; j < sum.values.size(); ++j) sum.values[j] += b.values[j];
    for (double p : {1.0, 1.5, 2.0, 4.0, 7.0}) CHECK(lp_norm(sum, p) <= lp_norm(a, p) + lp_norm(b, p) + 1e-14);
  }
}

TEST_CASE("smoothing estimate", "[spectral][semigroup]") {
  const Basis basis(64, 1024);
  SECTION("r = p reduces to contraction") {
    for (int draw = 0; draw < 10; ++draw) {
      const auto g = basis.synthesize(random_field(64, 300 + draw));
      for (double p : {1.5, 2.0, 4.0})
        for (double t : {0.001, 0.1, 1.0}) {
          const auto rep = smoothing_check(g, t, p, p);
          CHECK(rep.rhs == Catch::Approx(lp_norm(g, p)));
          CHECK(rep.satisfied);
        }
    }
  }
  SECTION("e_1 with r = 2, p = 4, t = 1") {
    SpectralField e1(64);
    e1.coeffs[0] = 1.0;
    const auto rep = smoothing_check(basis.synthesize(e1), 1.0, 2.0, 4.0);
    // lhs = e^{-1} ||e_1||_4, rhs = ||e_1||_2 = 1.
    const double e1_l4 = std::sqrt(2.0 / std::numbers::pi) * std::pow(3.0 * std::numbers::pi / 8.0, 0.25);
    CHECK(rep.lhs == Catch::Approx(std::exp(-1.0) * e1_l4).epsilon(1e-9));
    CHECK(rep.rhs == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(rep.satisfied);
  }
  SECTION("randomized sweep") {
    for (int draw = 0; draw < 20; ++draw) {
      const auto g = basis.synthesize(random_field(64, 400 + draw));
      for (double r : {2.0, 4.0})
        for (double p : {4.0, 6.0})
          for (double t : {0.05, 0.5}) CHECK(smoothing_check(g, t, r, p).satisfied);
    }
  }
  SECTION("parameter checks") {
    const auto g = basis.synthesize(random_field(64, 1));
    CHECK_THROWS_AS(smoothing_check(g, 0.1, 4.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_check(g, 0.1, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_check(g, 0.0, 2.0, 4.0), std::domain_error);
  }
}

TEST_CASE("non-finite coefficients are caught", "[spectral]") {
  SpectralField u(3);
  CHECK_NOTHROW(u.check_finite());
  u.coeffs[1] = std::nan("");
  CHECK_THROWS(u.check_finite());
}
