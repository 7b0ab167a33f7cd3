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

#include "kvpoison/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace kvpoison {

MeanWithError Summarize(std::span<const double> values) {
  MeanWithError out;
  if (values.empty()) return out;
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.standard_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

double FrequencyGain(const EstimateTable& before, const EstimateTable& after,
                     const TargetSet& targets) {
  double gain = 0.0;
  for (int k : targets.keys()) {
    gain += after.frequency[k - 1] - before.frequency[k - 1];
  }
  return gain;
}

double MeanGain(const EstimateTable& before, const EstimateTable& after,
                const TargetSet& targets) {
  double gain = 0.0;
  for (int k : targets.keys()) gain += after.mean[k - 1] - before.mean[k - 1];
  return gain;
}

absl::StatusOr<GainReport> GainMetrics(std::span<const EstimateTable> before,
                                       std::span<const EstimateTable> after,
                                       std::span<const TargetSet> targets) {
  if (before.size() != after.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("trial count mismatch: ", before.size(), " before vs ",
                     after.size(), " after"));
  }
  if (targets.size() != 1 && targets.size() != before.size()) {
    return absl::InvalidArgumentError(
        "need one target set or one per trial");
  }
  GainReport report;
  report.trials = static_cast<int>(before.size());
  for (size_t t = 0; t < before.size(); ++t) {
    const TargetSet& tset = targets.size() == 1 ? targets[0] : targets[t];
    for (int k : tset.keys()) {
      if (k > before[t].num_keys() || k > after[t].num_keys()) {
        return absl::InvalidArgumentError("target outside the estimate table");
      }
    }
    report.frequency_per_trial.push_back(FrequencyGain(before[t], after[t], tset));
    report.mean_per_trial.push_back(MeanGain(before[t], after[t], tset));
  }
  report.frequency = Summarize(report.frequency_per_trial);
  report.mean = Summarize(report.mean_per_trial);
  return report;
}

absl::StatusOr<std::vector<int>> RecommendTopT(const EstimateTable& table,
                                               const RecommenderConfig& config,
                                               Rng& rng) {
  const int d = table.num_keys();
  if (config.t < 1 || config.t > d) {
    return absl::InvalidArgumentError(
        absl::StrCat("t must lie in 1..", d, ", got ", config.t));
  }
  std::vector<int> keys(d);
  std::iota(keys.begin(), keys.end(), 1);
  const auto& f = table.frequency;
  const auto& m = table.mean;
  switch (config.which) {
    case RecommenderCase::kFrequency:
      std::sort(keys.begin(), keys.end(), [&](int x, int y) {
        if (f[x - 1] != f[y - 1]) return f[x - 1] > f[y - 1];
        if (m[x - 1] != m[y - 1]) return m[x - 1] > m[y - 1];
        return x < y;
      });
      break;
    case RecommenderCase::kScore:
      std::sort(keys.begin(), keys.end(), [&](int x, int y) {
        if (m[x - 1] != m[y - 1]) return m[x - 1] > m[y - 1];
        if (f[x - 1] != f[y - 1]) return f[x - 1] > f[y - 1];
        return x < y;
      });
      break;
    case RecommenderCase::kTotalScore: {
      const auto& mu = table.mean_uncalibrated.empty() ? table.mean
                                                       : table.mean_uncalibrated;
      std::vector<double> product(d);
      std::vector<uint64_t> priority(d);
      for (int k = 0; k < d; ++k) {
        product[k] = f[k] * mu[k];
        priority[k] = rng();
      }
      std::sort(keys.begin(), keys.end(), [&](int x, int y) {
        if (product[x - 1] != product[y - 1]) {
          return product[x - 1] > product[y - 1];
        }
        if (priority[x - 1] != priority[y - 1]) {
          return priority[x - 1] < priority[y - 1];
        }
        return x < y;
      });
      break;
    }
    default:
      return absl::InvalidArgumentError("unknown recommender case");
  }
  keys.resize(config.t);
  return keys;
}

absl::StatusOr<double> AttackSuccessRate(const TargetSet& targets,
                                         std::span<const int> recommended,
                                         std::span<const int> pre_attack) {
  if (targets.size() == 0) {
    return absl::InvalidArgumentError("empty target set");
  }
  int hits = 0;
  for (int k : targets.keys()) {
    if (std::find(pre_attack.begin(), pre_attack.end(), k) != pre_attack.end()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "target ", k, " was already recommended before the attack"));
    }
    hits += std::find(recommended.begin(), recommended.end(), k) !=
            recommended.end();
  }
  return static_cast<double>(hits) / targets.size();
}

DetectionRates DetectionMetrics(const std::vector<bool>& detected,
                                int num_genuine, int num_fake) {
  DetectionRates rates;
  auto flagged = [&](int u) {
    return u < static_cast<int>(detected.size()) && detected[u];
  };
  if (num_genuine > 0) {
    int fp = 0;
    for (int u = 0; u < num_genuine; ++u) fp += flagged(u);
    rates.fpr = static_cast<double>(fp) / num_genuine;
  }
  if (num_fake > 0) {
    int missed = 0;
    for (int u = num_genuine; u < num_genuine + num_fake; ++u) {
      missed += !flagged(u);
    }
    rates.fnr = static_cast<double>(missed) / num_fake;
  }
  return rates;
}

}  // namespace kvpoison
