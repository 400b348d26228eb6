#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"

#include "archicop/density.hpp"
#include "archicop/errors.hpp"
#include "archicop/rank.hpp"
#include "archicop/rng.hpp"
#include "archicop/sampling.hpp"
#include "test_helpers.hpp"

namespace ac = archicop;
using ac::Family;

TEST_SUITE("sampling") {

TEST_CASE("streams are pure functions of their key") {
  ac::RngStream a(42, 3, ac::StreamPurpose::data);
  ac::RngStream b(42, 3, ac::StreamPurpose::data);
  ac::RngStream c(42, 4, ac::StreamPurpose::data);
  ac::RngStream d(42, 3, ac::StreamPurpose::smle);
  bool differs_c = false;
  bool differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs_c = differs_c || x != c.next_u64();
    differs_d = differs_d || x != d.next_u64();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  CHECK(a.counter() == 100);
  // a substream does not depend on how far the parent has advanced
  ac::RngStream p(1);
  const auto s1 = p.substream(7).uniform();
  p.next_u64();
  CHECK(p.substream(7).uniform() == s1);
}

TEST_CASE("uniforms lie in the open unit interval and have the right moments") {
  ac::RngStream r(5);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
  CHECK(sq / n - (sum / n) * (sum / n) == doctest::Approx(1.0 / 12).epsilon(0.01));
  double nsum = 0.0;
  double nsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    nsum += z;
    nsq += z * z;
  }
  CHECK(std::fabs(nsum / n) < 0.01);
  CHECK(nsq / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("gamma variates") {
  ac::RngStream r(6);
  for (double shape : {0.3, 1.0, 4.5}) {
    const int n = 100000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = ac::sample_gamma(shape, r);
      sum += g;
      sq += g * g;
    }
    const double mean = sum / n;
    CHECK(mean == doctest::Approx(shape).epsilon(0.03));
    CHECK(sq / n - mean * mean == doctest::Approx(shape).epsilon(0.05));
  }
  CHECK_THROWS_AS(ac::sample_gamma(0.0, r), ac::DomainError);
}

// The empirical Laplace transform of the frailty must match the generator.
TEST_CASE("frailty variates reproduce the generator as their Laplace transform") {
  ac::RngStream r(7);
  for (Family f : ac::kAllFamilies) {
    for (double tau : {0.2, 0.6}) {
      if (f == Family::A && tau >= 1.0 / 3.0) continue;
      const ac::FamilySpec s(f, ac::tau_inv(f, tau));
      const auto v = ac::sample_V_block(s, 100000, r);
      for (double t : {0.1, 0.5, 2.0}) {
        double sum = 0.0;
        double sq = 0.0;
        for (double x : v) {
          const double e = std::exp(-t * x);
          sum += e;
          sq += e * e;
        }
        const double mean = sum / v.size();
        const double se = std::sqrt((sq / v.size() - mean * mean) / v.size());
        INFO(ac::to_string(f) << " tau=" << tau << " t=" << t);
        CHECK(std::fabs(mean - ac::psi(s, t)) < 5.0 * se + 1e-12);
      }
    }
  }
}

TEST_CASE("discrete frailties live on the positive integers") {
  ac::RngStream r(8);
  for (int i = 0; i < 10000; ++i) {
    for (double v : {ac::sample_logarithmic(3.0, r), ac::sample_sibuya(0.4, r), ac::sample_geometric(0.7, r)}) {
      REQUIRE(v >= 1.0);
      REQUIRE(v == std::floor(v));
    }
  }
  // Sibuya with alpha = 1 is degenerate at 1
  CHECK(ac::sample_sibuya(1.0, r) == 1.0);
  // for large Frank parameters most variates exceed the double range and come back as +inf
  for (int i = 0; i < 1000; ++i) {
    const double v = ac::sample_logarithmic(4000.0, r);
    CHECK(v >= 1.0);
  }
  const ac::FamilySpec big(Family::F, 4000.0);
  ac::RngStream rv(10);
  const auto block = ac::sample_V_block(big, 100, rv);
  CHECK(std::isfinite(ac::smle_log_dpsi(5, 1e-3, block)));
}

TEST_CASE("copula samples: unit cube and Kendall's tau") {
  for (Family f : ac::kAllFamilies) {
    for (double tau : {0.25, 0.75}) {
      if (f == Family::A && tau >= 1.0 / 3.0) continue;
      ac::RngStream r(9, 0, ac::StreamPurpose::test);
      const auto u = ac::sample_copula(ac::FamilySpec(f, ac::tau_inv(f, tau)), 2000, 3, r);
      for (double x : u.values()) {
        REQUIRE(x > 0.0);
        REQUIRE(x < 1.0);
      }
      for (double t : ac::pairwise_tau(u, ac::Exec::serial)) {
        INFO(ac::to_string(f) << " tau=" << tau);
        CHECK(t == doctest::Approx(tau).epsilon(0.1));
      }
    }
  }
}

TEST_CASE("independence samples") {
  ac::RngStream r(10);
  const auto u = ac::sample_copula(ac::FamilySpec(Family::G, 1.0), 3000, 2, r);
  CHECK(std::fabs(ac::pairwise_tau(u)[0]) < 0.05);
}

}  // TEST_SUITE

TEST_SUITE("rank") {

TEST_CASE("pseudo-observations with ties") {
  ac::Matrix x(4, 2);
  const double col0[] = {3.0, 1.0, 2.0, 10.0};
  const double col1[] = {5.0, 5.0, 1.0, 5.0};
  for (int i = 0; i < 4; ++i) {
    x(i, 0) = col0[i];
    x(i, 1) = col1[i];
  }
  const auto p = ac::pobs(x);
  CHECK(p(0, 0) == doctest::Approx(3.0 / 5));
  CHECK(p(1, 0) == doctest::Approx(1.0 / 5));
  CHECK(p(3, 0) == doctest::Approx(4.0 / 5));
  CHECK(p(2, 1) == doctest::Approx(1.0 / 5));
  CHECK(p(0, 1) == doctest::Approx(3.0 / 5));  // ranks 2, 3, 4 average to 3
}

TEST_CASE("Knight's tau equals the quadratic definition, also with ties") {
  std::mt19937_64 gen(13);
  std::uniform_int_distribution<int> small(0, 5);
  std::normal_distribution<double> N;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rep % 40;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      const bool ties = rep % 2 == 0;
      a[i] = ties ? small(gen) : N(gen);
      b[i] = ties ? small(gen) : a[i] + N(gen);
    }
    CHECK(ac::sample_tau(a, b) == doctest::Approx(ac::sample_tau_naive(a, b)).epsilon(1e-14));
  }
  const double x[] = {1, 2, 3, 4};
  const double y[] = {4, 3, 2, 1};
  CHECK(ac::sample_tau(x, x) == 1.0);
  CHECK(ac::sample_tau(x, y) == -1.0);
}

TEST_CASE("rank statistics are invariant under monotone margins") {
  ac::RngStream r(14);
  const auto u = ac::sample_copula(ac::FamilySpec(Family::C, 2.0), 200, 4, r);
  ac::Matrix x = u;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    x(i, 0) = std::log(x(i, 0));
    x(i, 1) = std::exp(5 * x(i, 1));
    x(i, 2) = -1.0 / x(i, 2);
  }
  CHECK(ac::pobs(x) == ac::pobs(u));
  CHECK(ac::pairwise_tau(x) == ac::pairwise_tau(u));
}

}  // TEST_SUITE
