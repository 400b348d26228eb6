// Every estimator gets closer to the truth as the sample grows. Slow; runs as
// its own ctest entry.

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "doctest.h"

#include "archicop/study.hpp"

namespace ac = archicop;
using ac::Family;
using ac::Method;

namespace {

double median(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const std::size_t m = x.size() / 2;
  return x.size() % 2 ? x[m] : 0.5 * (x[m - 1] + x[m]);
}

}  // namespace

TEST_SUITE("consistency") {

TEST_CASE("median absolute error shrinks with the sample size") {
  std::map<std::pair<Family, Method>, std::vector<double>> med;
  for (std::size_t n : {100u, 400u, 1600u}) {
    ac::StudyConfig cfg;
    cfg.families.assign(ac::kAllFamilies.begin(), ac::kAllFamilies.end());
    cfg.d_list = {5};
    cfg.tau_targets = {0.25};
    cfg.n = n;
    cfg.replications = 100;
    cfg.methods.assign(ac::kAllMethods.begin(), ac::kAllMethods.end());
    cfg.master_seed = 3;
    cfg.est.smle_m = 1000;
    cfg.record_time = false;
    const auto rep = ac::run_study(cfg);
    std::map<std::pair<Family, Method>, std::vector<double>> err;
    for (const auto& r : rep.raw) {
      if (std::isfinite(r.theta_hat)) err[{r.family, r.method}].push_back(std::fabs(r.theta_hat - r.theta0));
    }
    for (const auto& [key, e] : err) med[key].push_back(median(e));
  }
  for (const auto& [key, m] : med) {
    INFO(ac::to_string(key.first) << " " << ac::to_string(key.second) << " medians " << m[0] << " " << m[1] << " "
                                  << m[2]);
    REQUIRE(m.size() == 3);
    CHECK(m[0] > m[1]);
    CHECK(m[1] > m[2]);
  }
}

}  // TEST_SUITE
