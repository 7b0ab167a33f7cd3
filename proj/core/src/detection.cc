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

#include "kvpoison/detection.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "kvpoison/params.h"
#include "kvpoison/pckv.h"

namespace kvpoison {
namespace {

template <typename T>
std::vector<T> Survivors(const std::vector<T>& messages,
                         const std::vector<bool>& excluded) {
  std::vector<T> out;
  out.reserve(messages.size());
  for (size_t u = 0; u < messages.size(); ++u) {
    if (u >= excluded.size() || !excluded[u]) out.push_back(messages[u]);
  }
  return out;
}

}  // namespace

FeatureMatrix PrivKvmFeatures(
    std::span<const std::vector<PrivKvmMessage>> rounds,
    const Dictionary& dict) {
  FeatureMatrix out;
  if (rounds.empty()) return out;
  out.num_rows = static_cast<int>(rounds.front().size());
  out.num_cols = 3 * static_cast<int>(rounds.size());
  out.values.resize(static_cast<size_t>(out.num_rows) * out.num_cols);
  const double d = dict.num_keys();
  for (int u = 0; u < out.num_rows; ++u) {
    double* row = out.values.data() + static_cast<size_t>(u) * out.num_cols;
    for (size_t t = 0; t < rounds.size(); ++t) {
      const PrivKvmMessage& m = rounds[t][u];
      row[3 * t] = m.key / d;
      row[3 * t + 1] = m.kp;
      row[3 * t + 2] = m.vp;
    }
  }
  return out;
}

FeatureMatrix UeFeatures(std::span<const UeVector> messages,
                         const Dictionary& dict) {
  FeatureMatrix out;
  out.num_rows = static_cast<int>(messages.size());
  out.num_cols = dict.padded_size();
  out.values.assign(static_cast<size_t>(out.num_rows) * out.num_cols, 0.0);
  for (int u = 0; u < out.num_rows; ++u) {
    const auto& bits = messages[u].bits;
    const int len = std::min<int>(out.num_cols, static_cast<int>(bits.size()));
    for (int i = 0; i < len; ++i) {
      out.values[static_cast<size_t>(u) * out.num_cols + i] = bits[i];
    }
  }
  return out;
}

FeatureMatrix GrrFeatures(std::span<const GrrPair> messages) {
  FeatureMatrix out;
  out.num_rows = static_cast<int>(messages.size());
  out.num_cols = 2;
  out.values.resize(2 * messages.size());
  for (size_t u = 0; u < messages.size(); ++u) {
    out.values[2 * u] = messages[u].key;
    out.values[2 * u + 1] = messages[u].value;
  }
  return out;
}

absl::StatusOr<std::vector<int>> SampleKnownGenuine(int num_genuine,
                                                    double lambda, Rng& rng) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    return absl::InvalidArgumentError("lambda must lie in (0, 1]");
  }
  if (num_genuine < 1) {
    return absl::InvalidArgumentError("no genuine users to sample from");
  }
  const int count = std::clamp(
      static_cast<int>(std::llround(lambda * num_genuine)), 1, num_genuine);
  std::vector<int> pool(num_genuine);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    std::swap(pool[i], pool[UniformInt(rng, i, num_genuine - 1)]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

absl::StatusOr<OneClassResult> OneClassDetect(const FeatureMatrix& features,
                                              std::span<const int> known_genuine,
                                              const DefenseConfig& config) {
  if (known_genuine.empty()) {
    return absl::InvalidArgumentError("known genuine set is empty");
  }
  absl::StatusOr<IsolationForest> forest =
      IsolationForest::Fit(features, config.forest);
  if (!forest.ok()) return forest.status();
  OneClassResult result;
  result.scores = forest->ScoreAll(features);
  const int n = features.num_rows;
  std::vector<bool> high(n);
  int high_size = 0;
  for (int u = 0; u < n; ++u) {
    high[u] = result.scores[u] >= config.score_threshold;
    high_size += high[u];
  }
  result.detected.assign(n, false);
  if (high_size == 0 || high_size == n) return result;
  result.split_found = true;

  int known_high = 0;
  for (int u : known_genuine) {
    if (u < 0 || u >= n) {
      return absl::InvalidArgumentError(
          absl::StrCat("known genuine index ", u, " out of range"));
    }
    known_high += high[u];
  }
  const int known_low = static_cast<int>(known_genuine.size()) - known_high;
  bool high_is_genuine;
  if (known_high != known_low) {
    high_is_genuine = known_high > known_low;
  } else {
    high_is_genuine = high_size > n - high_size;
  }
  for (int u = 0; u < n; ++u) result.detected[u] = high[u] != high_is_genuine;
  return result;
}

absl::StatusOr<AnomalyState> AnomalyState::Create(Protocol protocol,
                                                  int num_users,
                                                  const Dictionary& dict) {
  if (protocol != Protocol::kPrivKvm) {
    return absl::InvalidArgumentError(
        "anomaly-score detection applies to PrivKVM only");
  }
  if (num_users < 0) {
    return absl::InvalidArgumentError("negative user count");
  }
  return AnomalyState(num_users, dict.num_keys());
}

absl::Status AnomalyState::Update(std::span<const PrivKvmMessage> messages) {
  if (messages.size() != scores_.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", scores_.size(), " messages, got ",
                     messages.size()));
  }
  for (size_t u = 0; u < messages.size(); ++u) {
    const int key = messages[u].key;
    if (key < 1 || key > num_keys_) {
      return absl::InvalidArgumentError("key index out of range");
    }
    uint16_t& count = counts_[u * num_keys_ + (key - 1)];
    ++count;
    scores_[u] = std::max<int>(scores_[u], count);
  }
  ++rounds_;
  return absl::OkStatus();
}

absl::StatusOr<std::vector<int>> AnomalyDetect(const AnomalyState& state,
                                               int eta,
                                               std::vector<bool>& flagged) {
  if (eta < 1) {
    return absl::InvalidArgumentError("anomaly threshold must be >= 1");
  }
  const std::vector<int>& scores = state.scores();
  if (flagged.size() < scores.size()) flagged.resize(scores.size(), false);
  std::vector<int> fresh;
  for (size_t u = 0; u < scores.size(); ++u) {
    if (!flagged[u] && scores[u] >= eta) {
      flagged[u] = true;
      fresh.push_back(static_cast<int>(u));
    }
  }
  return fresh;
}

absl::StatusOr<EstimateTable> ReaggregateExcluding(
    Protocol protocol, std::span<const MessageBatch> rounds,
    const std::vector<bool>& excluded, const PrivacyParams& privacy,
    const Dictionary& dict, AggregateOptions options) {
  if (rounds.empty()) {
    return absl::InvalidArgumentError("no message batches");
  }
  const size_t users = std::visit([](const auto& v) { return v.size(); },
                                  rounds.front());
  const size_t flagged = std::count(excluded.begin(), excluded.end(), true);
  if (users > 0 && flagged >= users) {
    return absl::FailedPreconditionError(
        "every user was excluded; nothing left to aggregate");
  }
  switch (protocol) {
    case Protocol::kPrivKvm: {
      const auto* first =
          std::get_if<std::vector<PrivKvmMessage>>(&rounds.front());
      const auto* last = std::get_if<std::vector<PrivKvmMessage>>(&rounds.back());
      if (first == nullptr || last == nullptr) {
        return absl::InvalidArgumentError("expected PrivKVM messages");
      }
      absl::StatusOr<PerturbParams> freq = DerivePerturbParams(
          protocol, EstimationStage::kFrequency, privacy, dict);
      if (!freq.ok()) return freq.status();
      absl::StatusOr<PerturbParams> mean = DerivePerturbParams(
          protocol, EstimationStage::kMean, privacy, dict);
      if (!mean.ok()) return mean.status();
      absl::StatusOr<EstimateTable> table = PrivKvmAggregateFrequency(
          Survivors(*first, excluded), *freq, dict, options);
      if (!table.ok()) return table.status();
      absl::StatusOr<PrivKvmMeans> means = PrivKvmAggregateMean(
          Survivors(*last, excluded), *mean, dict, options);
      if (!means.ok()) return means.status();
      table->mean = std::move(means->mean);
      table->mean_uncalibrated = std::move(means->mean_uncalibrated);
      return table;
    }
    case Protocol::kPckvUe:
    case Protocol::kPckvGrr: {
      absl::StatusOr<PerturbParams> params = DerivePerturbParams(
          protocol, EstimationStage::kFrequency, privacy, dict);
      if (!params.ok()) return params.status();
      SupportCounts counts;
      if (const auto* ue = std::get_if<std::vector<UeVector>>(&rounds.front());
          ue != nullptr && protocol == Protocol::kPckvUe) {
        counts = CountUeSupports(Survivors(*ue, excluded), dict);
      } else if (const auto* grr =
                     std::get_if<std::vector<GrrPair>>(&rounds.front());
                 grr != nullptr && protocol == Protocol::kPckvGrr) {
        counts = CountGrrSupports(Survivors(*grr, excluded), dict);
      } else {
        return absl::InvalidArgumentError(
            "message batch does not match the protocol");
      }
      return PckvEstimate(counts, *params, dict, options);
    }
  }
  return absl::InvalidArgumentError("unknown protocol");
}

}  // namespace kvpoison
