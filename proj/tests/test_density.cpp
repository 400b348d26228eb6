#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "archicop/density.hpp"
#include "archicop/errors.hpp"
#include "archicop/sampling.hpp"
#include "test_helpers.hpp"

namespace ac = archicop;
using ac::Family;

namespace oracle {
#include "oracle/oracle_values.inc"
}

TEST_SUITE("density") {

TEST_CASE("log-densities against the oracle") {
  for (const auto& o : oracle::kOracleDensity) {
    const ac::FamilySpec s(test::fam(o.family), o.theta);
    const std::span<const double> u(o.u, o.d);
    INFO(o.family << " theta=" << o.theta << " d=" << o.d);
    const ac::DensityContext ctx(s, o.d);
    CHECK(test::mixed_err(ctx.log_density(u), o.value) < 1e-11);
    CHECK(test::mixed_err(ac::log_density_generic(s, u), o.value) < 1e-11);
  }
}

TEST_CASE("Clayton theta = 1 at the centre") {
  const double u[] = {0.5, 0.5};
  const ac::DensityContext ctx(ac::FamilySpec(Family::C, 1.0), 2);
  CHECK(ctx.log_density(u) == doctest::Approx(std::log(32.0 / 27.0)).epsilon(1e-14));
}

TEST_CASE("explicit and generic densities agree on random points") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> U(0.01, 0.99);
  for (Family f : ac::kAllFamilies) {
    for (double tau : {0.1, 0.3, 0.6}) {
      if (f == Family::A && tau >= 1.0 / 3.0) continue;
      for (int d : {2, 3, 10, 20}) {
        const ac::FamilySpec s(f, ac::tau_inv(f, tau));
        const ac::DensityContext ctx(s, d);
        std::vector<double> u(d);
        for (int rep = 0; rep < 10; ++rep) {
          for (double& x : u) x = U(gen);
          INFO(ac::to_string(f) << " tau=" << tau << " d=" << d);
          CHECK(test::mixed_err(ctx.log_density(u), ac::log_density_generic(s, u)) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("independence and argument checks") {
  const double u[] = {0.2, 0.7, 0.4};
  CHECK(ac::DensityContext(ac::FamilySpec(Family::G, 1.0), 3).log_density(u) == 0.0);
  CHECK(ac::DensityContext(ac::FamilySpec(Family::A, 0.0), 3).log_density(u) == 0.0);
  const double bad[] = {0.2, 1.0, 0.4};
  CHECK_THROWS_AS(ac::DensityContext(ac::FamilySpec(Family::C, 2.0), 3).log_density(bad), ac::DomainError);
  const double short_row[] = {0.2, 0.3};
  CHECK_THROWS_AS(ac::DensityContext(ac::FamilySpec(Family::C, 2.0), 3).log_density(short_row), ac::ArgumentError);
}

TEST_CASE("Gumbel log-likelihood at d = 100 is finite") {
  ac::RngStream rng(9, 0, ac::StreamPurpose::test);
  const ac::FamilySpec s(Family::G, ac::tau_inv(Family::G, 0.5));
  const auto u = ac::sample_copula(s, 50, 100, rng);
  for (double th : {1.5, 2.0, 2.5}) {
    const ac::DensityContext ctx(ac::FamilySpec(Family::G, th), 100);
    CHECK(std::isfinite(ac::log_likelihood(ctx, u, ac::Exec::serial)));
  }
}

TEST_CASE("simulated derivative approximates the exact one") {
  const ac::FamilySpec s(Family::C, 2.0);
  ac::RngStream rng(21, 0, ac::StreamPurpose::test);
  const auto v = ac::sample_V_block(s, 100000, rng);
  for (double t : {0.5, 2.0, 15.0}) {
    CHECK(ac::smle_log_dpsi(5, t, v) == doctest::Approx(ac::log_dpsi(s, 5, t)).epsilon(0.01));
  }
}

TEST_CASE("simulated derivative breaks down in the far tail for a sizable share of blocks") {
  // the mass of V^5 e^{-Vt} at t = 5e8 sits near V = 1e-8, which a block of
  // 1e4 gamma(1/2) draws hits only about once on average
  const ac::FamilySpec s(Family::C, 2.0);
  const double exact = ac::log_dpsi(s, 5, 5e8);
  int off = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    ac::RngStream rng(seed, 0, ac::StreamPurpose::test);
    const auto v = ac::sample_V_block(s, 10000, rng);
    if (ac::smle_log_dpsi(5, 5e8, v) < exact - 5.0) ++off;
  }
  CHECK(off > 20);
  CHECK(off < 180);
}

}  // TEST_SUITE
