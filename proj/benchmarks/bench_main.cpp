// Copyright 2026 The cvbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include <benchmark/benchmark.h>

#include "cvbounds/bounds.hpp"
#include "cvbounds/cv.hpp"
#include "cvbounds/harness.hpp"

namespace {

cvb::Dataset draw(std::size_t n) {
  cvb::CounterRng rng(1);
  return cvb::SyntheticDistribution(0.5, 0.1).sample(n, rng);
}

void BM_ErmThreshold(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = draw(n);
  const auto all = cvb::ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvb::erm_fit(cvb::HypothesisClass::threshold(), all, d, cvb::Loss::zero_one()));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ErmThreshold)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_ErmInterval(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = draw(n);
  const auto all = cvb::ones(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvb::erm_fit(cvb::HypothesisClass::interval(), all, d, cvb::Loss::zero_one()));
  }
}
BENCHMARK(BM_ErmInterval)->RangeMultiplier(4)->Range(16, 4096);

void BM_CrossValidateKFold(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = draw(n);
  const auto plan = cvb::make_kfold(n, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvb::cross_validate(plan, d, cvb::HypothesisClass::threshold(), cvb::Loss::zero_one()));
  }
}
BENCHMARK(BM_CrossValidateKFold)->Arg(40)->Arg(160)->Arg(640)->Arg(2560);

void BM_CrossValidateLoo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = draw(n);
  const auto plan = cvb::make_loo(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvb::cross_validate(plan, d, cvb::HypothesisClass::threshold(), cvb::Loss::zero_one()));
  }
}
BENCHMARK(BM_CrossValidateLoo)->RangeMultiplier(4)->Range(16, 1024);

void BM_BoundSymCombined(benchmark::State& state) {
  const cvb::BoundQuery q{10000, 0.1, 0.2, 3, cvb::Procedure::symmetric_combined, true, false};
  for (auto _ : state) benchmark::DoNotOptimize(cvb::bound_sym_combined(q));
}
BENCHMARK(BM_BoundSymCombined);

void BM_EstimationCurve(benchmark::State& state) {
  const auto grid = cvb::default_p_grid(10000, cvb::Procedure::symmetric_combined);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cvb::estimation_curve(10000, 0.1, 1, cvb::Procedure::symmetric_combined, grid));
  }
}
BENCHMARK(BM_EstimationCurve);

void BM_ExperimentTrials(benchmark::State& state) {
  cvb::ExperimentConfig cfg;
  cfg.n = 50;
  cvb::PlanSpec five;
  five.kind = cvb::PlanKind::k_fold;
  five.k = 5;
  cfg.plans = {five};
  cfg.trials = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(cvb::run_experiment(cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}
BENCHMARK(BM_ExperimentTrials)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
