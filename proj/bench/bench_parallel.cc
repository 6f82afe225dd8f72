/*
 * Copyright 2026 The cohortxai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial reference vs OpenMP paths for the three parallel kernels.

#include <benchmark/benchmark.h>

#include "cohortxai/explain.h"
#include "cohortxai/forest.h"
#include "cohortxai/parallel.h"
#include "cohortxai/pipeline.h"

namespace {

using namespace cohortxai;

const Dataset& cohort() {
  static const Dataset ds = [] {
    SyntheticSpec spec;
    spec.n_cases = 104;
    spec.n_controls = 520;
    spec.p_nutritional = 93;
    spec.p_phichar = 12;
    spec.informative = {{3, 1.0}, {17, 1.0}, {40, 1.0}};
    spec.seed = 1;
    return generate_synthetic(spec);
  }();
  return ds;
}

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void label(benchmark::State& state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel/" + std::to_string(max_workers()));
}

void BM_FitForest(benchmark::State& state) {
  const Dataset& ds = cohort();
  ForestParams params;
  params.n_trees = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_forest(ds.values(), ds.labels(), params, 7, exec_of(state)));
  }
  label(state);
}
BENCHMARK(BM_FitForest)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MeanAbsShap(benchmark::State& state) {
  const Dataset& ds = cohort();
  ForestParams params;
  params.n_trees = 100;
  const TrainedModel model = fit_forest(ds.values(), ds.labels(), params, 7);
  std::vector<std::size_t> rows(64);
  std::iota(rows.begin(), rows.end(), 0);
  const Matrix x = select_rows(ds.values(), rows);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mean_abs_shap(model, x, ds.values(), {32, 3, exec_of(state)}));
  }
  label(state);
}
BENCHMARK(BM_MeanAbsShap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_SamplingShap(benchmark::State& state) {
  const Dataset& ds = cohort();
  auto f = [](std::span<const double> z) {
    double s = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) s += (j % 3 == 0 ? 1.0 : -0.5) * z[j] * z[j];
    return s;
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sampling_shap(f, ds.values().row(0), ds.values(), {256, 5, exec_of(state)}));
  }
  label(state);
}
BENCHMARK(BM_SamplingShap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_RunExperiment(benchmark::State& state) {
  ExperimentConfig c;
  c.feature_set = FeatureSet::kNutritional;
  c.k = 5;
  c.seed = 11;
  c.hyper.forest.n_trees = 30;
  c.exec = exec_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(cohort(), c));
  }
  label(state);
}
BENCHMARK(BM_RunExperiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
