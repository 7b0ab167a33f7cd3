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

#ifndef KVPOISON_METRICS_H_
#define KVPOISON_METRICS_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/random.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct MeanWithError {
  double mean = 0.0;
  // Sample standard deviation over sqrt(count); 0 for fewer than two values.
  double standard_error = 0.0;
};
MeanWithError Summarize(std::span<const double> values);

// Sum over targets of (after - before), per trial, plus their average.
struct GainReport {
  int trials = 0;
  std::vector<double> frequency_per_trial;
  std::vector<double> mean_per_trial;
  MeanWithError frequency;
  MeanWithError mean;
};

// `targets` holds either one set shared by all trials or one per trial.
absl::StatusOr<GainReport> GainMetrics(std::span<const EstimateTable> before,
                                       std::span<const EstimateTable> after,
                                       std::span<const TargetSet> targets);

// Per-trial gains of one table pair.
double FrequencyGain(const EstimateTable& before, const EstimateTable& after,
                     const TargetSet& targets);
double MeanGain(const EstimateTable& before, const EstimateTable& after,
                const TargetSet& targets);

enum class RecommenderCase {
  kFrequency = 1,       // f desc, ties by mean desc
  kScore = 2,           // mean desc, ties by f desc
  kTotalScore = 3,      // f * uncalibrated mean desc, ties random
};

struct RecommenderConfig {
  RecommenderCase which = RecommenderCase::kFrequency;
  int t = 20;
};

// The top-t keys. Remaining ties fall to the lower key id. The total-score
// case draws one random priority per key from `rng` to break ties.
absl::StatusOr<std::vector<int>> RecommendTopT(const EstimateTable& table,
                                               const RecommenderConfig& config,
                                               Rng& rng);

// |targets ∩ recommended| / r. Fails if a target was already recommended
// before the attack.
absl::StatusOr<double> AttackSuccessRate(const TargetSet& targets,
                                         std::span<const int> recommended,
                                         std::span<const int> pre_attack);

struct DetectionRates {
  std::optional<double> fpr;  // absent without genuine users
  std::optional<double> fnr;  // absent without fake users
};

// Users [0, num_genuine) are genuine, the rest fake.
DetectionRates DetectionMetrics(const std::vector<bool>& detected,
                                int num_genuine, int num_fake);

}  // namespace kvpoison

#endif  // KVPOISON_METRICS_H_
