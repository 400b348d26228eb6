// Serial reference versus OpenMP variant for the row kernels and the
// replication loop.

#include <benchmark/benchmark.h>

#include "archicop/density.hpp"
#include "archicop/estimators.hpp"
#include "archicop/rank.hpp"
#include "archicop/sampling.hpp"
#include "archicop/study.hpp"
#include "archicop/transform.hpp"

namespace ac = archicop;

namespace {

ac::Exec exec_of(const benchmark::State& st) { return st.range(0) ? ac::Exec::parallel : ac::Exec::serial; }

const ac::Matrix& gumbel_data(int d) {
  static ac::Matrix m5, m20, m100;
  ac::Matrix& m = d == 5 ? m5 : (d == 20 ? m20 : m100);
  if (m.empty()) {
    ac::RngStream rng(7, 0, ac::StreamPurpose::test);
    m = ac::sample_copula(ac::FamilySpec(ac::Family::G, ac::tau_inv(ac::Family::G, 0.5)), 1000, d, rng);
  }
  return m;
}

void BM_LogLikelihoodGumbel(benchmark::State& st) {
  const int d = static_cast<int>(st.range(1));
  const auto& u = gumbel_data(d);
  const ac::DensityContext ctx(ac::FamilySpec(ac::Family::G, 2.0), d, ac::PolyGMethod::automatic);
  for (auto _ : st) benchmark::DoNotOptimize(ac::log_likelihood(ctx, u, exec_of(st)));
}
BENCHMARK(BM_LogLikelihoodGumbel)->ArgsProduct({{0, 1}, {5, 20, 100}})->Unit(benchmark::kMillisecond);

void BM_PairwiseTau(benchmark::State& st) {
  const auto& u = gumbel_data(static_cast<int>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(ac::pairwise_tau(u, exec_of(st)));
}
BENCHMARK(BM_PairwiseTau)->ArgsProduct({{0, 1}, {20, 100}})->Unit(benchmark::kMillisecond);

void BM_Transform(benchmark::State& st) {
  const auto& u = gumbel_data(static_cast<int>(st.range(1)));
  const ac::FamilySpec spec(ac::Family::G, 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(ac::hh_transform(spec, u, true, exec_of(st)));
}
BENCHMARK(BM_Transform)->ArgsProduct({{0, 1}, {5, 20}})->Unit(benchmark::kMillisecond);

void BM_StudyReplications(benchmark::State& st) {
  ac::StudyConfig cfg;
  cfg.families = {ac::Family::C};
  cfg.d_list = {5};
  cfg.tau_targets = {0.25};
  cfg.replications = 16;
  cfg.methods = {ac::Method::mle, ac::Method::tau_tau_bar};
  cfg.exec = exec_of(st);
  cfg.record_time = false;
  for (auto _ : st) benchmark::DoNotOptimize(ac::run_study(cfg));
}
BENCHMARK(BM_StudyReplications)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
