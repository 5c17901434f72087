#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "sgdinf/batch_scheme.hpp"
#include "sgdinf/covariance.hpp"
#include "sgdinf/models.hpp"
#include "sgdinf/quantiles.hpp"
#include "sgdinf/rng.hpp"
#include "sgdinf/sgd.hpp"

namespace {

using namespace sgdinf;

void BM_OverlapUpdate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  OverlapCovariance cov(d, scheme);
  RngStream rng(1);
  Eigen::VectorXd x(d);
  for (int k = 0; k < d; ++k) x(k) = rng.normal();
  for (auto _ : state) {
    cov.update(x);
    benchmark::DoNotOptimize(cov.length_sum());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OverlapUpdate)->Arg(1)->Arg(5)->Arg(20)->Arg(50);

void BM_NonOverlapUpdate(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  NonOverlapCovariance cov(d, scheme);
  RngStream rng(1);
  Eigen::VectorXd x(d);
  for (int k = 0; k < d; ++k) x(k) = rng.normal();
  for (auto _ : state) {
    cov.update(x);
    benchmark::DoNotOptimize(cov.current_length());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_NonOverlapUpdate)->Arg(1)->Arg(5)->Arg(20);

// Full per-observation cost: draw, SGD step, covariance update.
void BM_PipelineStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const LinearRegressionModel model =
      LinearRegressionModel::random_coefficients(d, 3);
  const StepSchedule schedule(0.1, 0.501);
  const BatchScheme scheme = BatchScheme::for_alpha(2.0, 0.501);
  SgdState sgd(d);
  OverlapCovariance cov(d, scheme);
  RngStream rng(4);
  for (auto _ : state) {
    const Observation obs = model.draw(rng);
    sgd_step(sgd, obs, model, schedule);
    cov.update(sgd.x);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PipelineStep)->Arg(1)->Arg(5)->Arg(20);

void BM_ZQuantile(benchmark::State& state) {
  double p = 0.0001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(z_quantile(p));
    p += 1e-7;
  }
}
BENCHMARK(BM_ZQuantile);

void BM_Chi2Quantile(benchmark::State& state) {
  double p = 0.0001;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chi2_quantile(5, p));
    p += 1e-7;
  }
}
BENCHMARK(BM_Chi2Quantile);

}  // namespace

BENCHMARK_MAIN();
