#include <benchmark/benchmark.h>

#include "xbarsim/clements.hpp"
#include "xbarsim/montecarlo.hpp"
#include "xbarsim/rng.hpp"
#include "xbarsim/xbar.hpp"

using namespace xbarsim;

static void BM_ClementsDecompose(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix u = svd_factorize(random_target_matrix(n, 1)).u;
  for (auto _ : state) benchmark::DoNotOptimize(clements_decompose(u));
}
BENCHMARK(BM_ClementsDecompose)->Arg(8)->Arg(20)->Arg(64);

static void BM_BuildSvdClements(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix d = random_target_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(build_svd_clements(d, LossModel::silicon_passives()));
}
BENCHMARK(BM_BuildSvdClements)->Arg(8)->Arg(20);

static void BM_EvaluateSvdClements(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ClementsDevice dev =
      build_svd_clements(random_target_matrix(n, 3), LossModel::silicon_passives().with_node_loss(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_svd_clements(dev));
}
BENCHMARK(BM_EvaluateSvdClements)->Arg(8)->Arg(20)->Arg(64);

static void BM_EvaluateXbar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const XbarDevice dev =
      build_xbar(random_target_matrix(n, 4), LossModel::silicon_passives(), XbarMode::balanced);
  const std::vector<Complex> x(static_cast<std::size_t>(n), Complex(0.5, 0.1));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_xbar(dev, x));
}
BENCHMARK(BM_EvaluateXbar)->Arg(8)->Arg(20)->Arg(64);

static void BM_PerturbAndEvaluateSvd(benchmark::State& state) {
  const ClementsDevice dev = build_svd_clements(random_target_matrix(20, 5), LossModel::lossless());
  RandomStream stream(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_svd_clements(
        perturb_device(dev, PhaseErrorModel::independent_per_node, 0.1, stream)));
  }
}
BENCHMARK(BM_PerturbAndEvaluateSvd);

static void BM_PhaseSweepPoint(benchmark::State& state) {
  SweepConfig cfg;
  cfg.n_values = {8};
  cfg.sigma_grid = {0.1};
  cfg.n_matrices = 20;
  cfg.n_phase_trials = 10;
  for (auto _ : state) benchmark::DoNotOptimize(phase_fidelity_sweep(cfg));
}
BENCHMARK(BM_PhaseSweepPoint)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
