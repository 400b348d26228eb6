#include <cmath>
#include <vector>

#include "doctest.h"

#include "archicop/errors.hpp"
#include "archicop/polynomials.hpp"
#include "test_helpers.hpp"

namespace ac = archicop;
using ac::PolyGMethod;

namespace oracle {
#include "oracle/oracle_values.inc"
}

namespace {
constexpr PolyGMethod kMethods[] = {PolyGMethod::pois_direct, PolyGMethod::pois, PolyGMethod::stirling,
                                    PolyGMethod::dssib_log, PolyGMethod::recurrence};
}

TEST_SUITE("polynomials") {

TEST_CASE("method tags") {
  for (PolyGMethod m : kMethods) CHECK(ac::parse_polyg_method(ac::to_string(m)) == m);
  CHECK(ac::parse_polyg_method("default") == PolyGMethod::automatic);
  CHECK_THROWS_AS(ac::parse_polyg_method("sort"), ac::ArgumentError);
}

TEST_CASE("Poisson-representation signs") {
  // alpha = 0.3: alpha j = 0.3, 0.6, 0.9, 1.2 -> j - ceil(alpha j) = 0, 1, 2, 2
  CHECK(ac::pois_sign(0.3, 1) == 1);
  CHECK(ac::pois_sign(0.3, 2) == -1);
  CHECK(ac::pois_sign(0.3, 3) == 1);
  CHECK(ac::pois_sign(0.3, 4) == 1);
  // alpha j integral with alpha < 1: the falling factorial vanishes
  CHECK(ac::pois_sign(0.5, 2) == 0);
}

TEST_CASE("polyG against the oracle, every method that reports success") {
  int successes = 0;
  for (const auto& o : oracle::kOraclePolyG) {
    const ac::GumbelPolynomial p(o.alpha, o.d);
    INFO("alpha=" << o.alpha << " d=" << o.d << " logx=" << o.logx);
    CHECK(test::mixed_err(p(o.logx), o.value) < 1e-9);
    for (PolyGMethod m : kMethods) {
      try {
        const double v = p(o.logx, m);
        ++successes;
        INFO("method " << ac::to_string(m));
        CHECK(test::mixed_err(v, o.value) < 1e-8);
      } catch (const ac::MethodFailure&) {
      }
    }
  }
  CHECK(successes > 300);
}

TEST_CASE("polyG coefficients: recurrence and binomial representation agree") {
  for (double alpha : {0.1, 0.5, 0.9, 1.0}) {
    for (int d : {1, 2, 5, 10}) {
      const auto r = ac::polyG_log_coefficients_recurrence(alpha, d);
      try {
        const auto s = ac::polyG_log_coefficients_dssib(alpha, d);
        for (int k = 0; k < d; ++k) {
          if (r[k] == ac::kNegInf) {
            CHECK(s[k] == ac::kNegInf);
          } else {
            CHECK(test::mixed_err(s[k], r[k]) < 1e-9);
          }
        }
      } catch (const ac::MethodFailure&) {
      }
    }
  }
  // alpha = 1: P(x) = x^d
  const auto c = ac::polyG_log_coefficients_recurrence(1.0, 4);
  CHECK(c[3] == doctest::Approx(0.0));
  CHECK(c[0] == ac::kNegInf);
}

TEST_CASE("polyJ against the oracle") {
  for (const auto& o : oracle::kOraclePolyJ) {
    INFO("alpha=" << o.alpha << " d=" << o.d << " logx=" << o.logx);
    CHECK(test::mixed_err(ac::polyJ(o.logx, o.alpha, o.d), o.value) < 1e-12);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(ac::polyG(0.0, 0.0, 5), ac::DomainError);
  CHECK_THROWS_AS(ac::polyG(0.0, 1.5, 5), ac::DomainError);
  CHECK_THROWS_AS(ac::polyG(0.0, 0.5, 0), ac::DomainError);
  CHECK_THROWS_AS(ac::polyG(0.0, 0.5, ac::kTableBound + 1), ac::CapacityError);
  CHECK_THROWS_AS(ac::polyG(std::nan(""), 0.5, 5), ac::DomainError);
  CHECK_THROWS_AS(ac::polyJ(0.0, 0.5, 0), ac::DomainError);
}

}  // TEST_SUITE
