// Copyright 2026 The kvpoison Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "kvpoison/attacks.h"
#include "kvpoison/dataset.h"
#include "kvpoison/isolation_forest.h"
#include "kvpoison/params.h"
#include "kvpoison/pckv.h"
#include "kvpoison/privkvm.h"
#include "kvpoison/random.h"

namespace kvpoison {
namespace {

Dataset Synthetic(int64_t users, int keys) {
  SyntheticConfig config;
  config.num_users = users;
  config.num_keys = keys;
  return GenerateSynthetic(config).value();
}

PerturbParams FrequencyParams(Protocol protocol, const Dictionary& dict) {
  return DerivePerturbParams(protocol, EstimationStage::kFrequency,
                             PrivacyParams::Create(1.0, 10).value(), dict)
      .value();
}

void BM_UePerturb(benchmark::State& state) {
  const Dictionary dict = Dictionary::Create(state.range(0), 1).value();
  const PerturbParams params = FrequencyParams(Protocol::kPckvUe, dict);
  Rng rng = MakeRng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(PckvUePerturb(3, 1, params, dict, rng));
  }
}
BENCHMARK(BM_UePerturb)->Arg(100)->Arg(1000);

void BM_PckvCollectAndEstimate(benchmark::State& state) {
  const Dataset data = Synthetic(state.range(0), 100);
  const Dictionary dict = Dictionary::Create(100, 1).value();
  const PerturbParams params = FrequencyParams(Protocol::kPckvGrr, dict);
  Rng rng = MakeRng(2);
  for (auto _ : state) {
    const std::vector<GrrPair> batch = PckvGrrCollect(data, params, dict, rng);
    benchmark::DoNotOptimize(
        PckvEstimate(CountGrrSupports(batch, dict), params, dict));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PckvCollectAndEstimate)->Arg(10000)->Arg(100000);

void BM_PrivKvmRun(benchmark::State& state) {
  const Dataset data = Synthetic(10000, 100);
  const Dictionary dict = Dictionary::Create(100, 1).value();
  const PrivacyParams privacy =
      PrivacyParams::Create(1.0, static_cast<int>(state.range(0))).value();
  uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(PrivKvmRun(data, privacy, dict, ++seed));
  }
}
BENCHMARK(BM_PrivKvmRun)->Arg(1)->Arg(10);

void BM_IsolationForestFit(benchmark::State& state) {
  FeatureMatrix data;
  data.num_rows = static_cast<int>(state.range(0));
  data.num_cols = 2;
  Rng rng = MakeRng(3);
  for (int i = 0; i < 2 * data.num_rows; ++i) data.values.push_back(UniformUnit(rng));
  ForestConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(IsolationForest::Fit(data, config));
  }
}
BENCHMARK(BM_IsolationForestFit)->Arg(10000);

void BM_IsolationForestScore(benchmark::State& state) {
  FeatureMatrix data;
  data.num_rows = 10000;
  data.num_cols = 2;
  Rng rng = MakeRng(4);
  for (int i = 0; i < 2 * data.num_rows; ++i) data.values.push_back(UniformUnit(rng));
  const IsolationForest forest = IsolationForest::Fit(data, ForestConfig{}).value();
  for (auto _ : state) benchmark::DoNotOptimize(forest.ScoreAll(data));
  state.SetItemsProcessed(state.iterations() * data.num_rows);
}
BENCHMARK(BM_IsolationForestScore);

void BM_CraftM2gaUe(benchmark::State& state) {
  const Dictionary dict = Dictionary::Create(100, 1).value();
  const PrivacyParams privacy = PrivacyParams::Create(1.0, 10).value();
  const AttackConfig config{AttackKind::kM2ga,
                            TargetSet::Create({5, 50}, 100).value(), 5000};
  Rng rng = MakeRng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        CraftM2ga(Protocol::kPckvUe, config, dict, privacy, rng));
  }
}
BENCHMARK(BM_CraftM2gaUe);

}  // namespace
}  // namespace kvpoison

BENCHMARK_MAIN();
