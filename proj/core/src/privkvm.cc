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

#include "kvpoison/privkvm.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "kvpoison/params.h"

namespace kvpoison {

PrivKvmSample PrivKvmSampleUser(const UserRecordSet& user,
                                const RoundState& state,
                                const Dictionary& dict, Rng& rng) {
  PrivKvmSample sample;
  sample.key = UniformInt(rng, 1, dict.num_keys());
  const int index = user.Find(sample.key);
  sample.possessed = index >= 0;
  const double value = sample.possessed
                           ? user.records[index].value
                           : state.virtual_means[sample.key - 1];
  sample.v_star = DiscretizeUnchecked(std::clamp(value, -1.0, 1.0), rng);
  return sample;
}

PrivKvmMessage PrivKvmPerturb(int key, int v_star, bool possessed,
                              double key_epsilon, double value_epsilon,
                              Rng& rng) {
  const bool keep_value = Bernoulli(rng, KeepProbability(value_epsilon));
  const bool keep_key = Bernoulli(rng, KeepProbability(key_epsilon));
  const int v_prime = keep_value ? v_star : -v_star;
  // Possessed keys report <1, v'> when kept; absent keys report it when the
  // key bit is flipped.
  const bool report = possessed ? keep_key : !keep_key;
  PrivKvmMessage message;
  message.key = key;
  message.kp = report ? 1 : 0;
  message.vp = report ? static_cast<int8_t>(v_prime) : 0;
  return message;
}

PrivKvmMessage PrivKvmPerturb(int key, int v_star, bool possessed,
                              const PrivacyParams& privacy, Rng& rng) {
  return PrivKvmPerturb(key, v_star, possessed, privacy.key_epsilon(),
                        privacy.value_epsilon(), rng);
}

SupportCounts CountPrivKvmSupports(std::span<const PrivKvmMessage> messages,
                                   const Dictionary& dict) {
  const int d = dict.num_keys();
  SupportCounts counts;
  counts.num_users = static_cast<int64_t>(messages.size());
  counts.positive.assign(d, 0);
  counts.negative.assign(d, 0);
  counts.reported.assign(d, 0);
  for (const PrivKvmMessage& m : messages) {
    if (m.kp != 1 || m.key < 1 || m.key > d) continue;
    ++counts.reported[m.key - 1];
    if (m.vp > 0) {
      ++counts.positive[m.key - 1];
    } else {
      ++counts.negative[m.key - 1];
    }
  }
  return counts;
}

absl::StatusOr<EstimateTable> PrivKvmAggregateFrequency(
    std::span<const PrivKvmMessage> messages, const PerturbParams& params,
    const Dictionary& dict, AggregateOptions options) {
  if (messages.empty()) {
    return absl::InvalidArgumentError("no messages to aggregate");
  }
  const double p = params.p;
  if (!(p > 0.5)) {
    return absl::InvalidArgumentError("frequency stage requires p > 1/2");
  }
  const SupportCounts counts = CountPrivKvmSupports(messages, dict);
  const int d = dict.num_keys();
  const double n = static_cast<double>(counts.num_users);

  EstimateTable table;
  table.frequency.resize(d);
  table.frequency_clipped.assign(d, false);
  table.mean.assign(d, 0.0);
  table.mean_uncalibrated.assign(d, 0.0);
  for (int k = 0; k < d; ++k) {
    const double rate = d * static_cast<double>(counts.reported[k]) / n;
    double f = (p - 1.0 + rate) / (2.0 * p - 1.0);
    if (options.clip) {
      const double clipped = std::clamp(f, 1.0 / n, 1.0);
      table.frequency_clipped[k] = clipped != f;
      f = clipped;
    }
    table.frequency[k] = f;
  }
  return table;
}

absl::StatusOr<PrivKvmMeans> PrivKvmAggregateMean(
    std::span<const PrivKvmMessage> messages, const PerturbParams& params,
    const Dictionary& dict, AggregateOptions options) {
  const double p = params.p;
  if (!(p > 0.5)) {
    return absl::InvalidArgumentError("mean stage requires p > 1/2");
  }
  const SupportCounts counts = CountPrivKvmSupports(messages, dict);
  const int d = dict.num_keys();
  PrivKvmMeans out;
  out.mean.assign(d, 0.0);
  out.mean_uncalibrated.assign(d, 0.0);
  for (int k = 0; k < d; ++k) {
    const double supporters = static_cast<double>(counts.reported[k]);
    if (supporters == 0.0) continue;
    double pos = ((p - 1.0) * supporters + counts.positive[k]) / (2.0 * p - 1.0);
    double neg = ((p - 1.0) * supporters + counts.negative[k]) / (2.0 * p - 1.0);
    if (options.clip) {
      pos = std::clamp(pos, 0.0, supporters);
      neg = std::clamp(neg, 0.0, supporters);
    }
    const double m = (pos - neg) / supporters;
    out.mean_uncalibrated[k] = m;
    out.mean[k] = options.clip ? std::clamp(m, -1.0, 1.0) : m;
  }
  return out;
}

absl::StatusOr<PrivKvmRunResult> PrivKvmRun(
    const Dataset& dataset, const PrivacyParams& privacy,
    const Dictionary& dict, uint64_t seed, const PrivKvmAdversary& adversary,
    const PrivKvmRoundHook& hook, PrivKvmRunOptions options) {
  if (dataset.num_keys != dict.num_keys()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dataset has d = ", dataset.num_keys,
                     " but dictionary has d = ", dict.num_keys()));
  }
  if (dataset.users.empty()) {
    return absl::InvalidArgumentError("dataset has no users");
  }
  absl::StatusOr<PerturbParams> freq_params = DerivePerturbParams(
      Protocol::kPrivKvm, EstimationStage::kFrequency, privacy, dict);
  if (!freq_params.ok()) return freq_params.status();
  absl::StatusOr<PerturbParams> mean_params = DerivePerturbParams(
      Protocol::kPrivKvm, EstimationStage::kMean, privacy, dict);
  if (!mean_params.ok()) return mean_params.status();

  const int d = dict.num_keys();
  RoundState state = RoundState::Initial(d);
  PrivKvmRunResult result;
  std::vector<PrivKvmMessage> round_messages;
  std::vector<PrivKvmMessage> surviving;
  PrivKvmMeans means;

  for (int round = 1; round <= privacy.num_rounds(); ++round) {
    state.round_index = round;
    round_messages.clear();
    round_messages.reserve(dataset.users.size());
    Rng genuine_rng = MakeRng(seed, {kStreamGenuine, static_cast<uint64_t>(round)});
    for (const UserRecordSet& user : dataset.users) {
      const PrivKvmSample s = PrivKvmSampleUser(user, state, dict, genuine_rng);
      round_messages.push_back(
          PrivKvmPerturb(s.key, s.v_star, s.possessed, privacy, genuine_rng));
    }
    if (adversary) {
      Rng fake_rng = MakeRng(seed, {kStreamFake, static_cast<uint64_t>(round)});
      std::vector<PrivKvmMessage> fake = adversary(round, fake_rng);
      round_messages.insert(round_messages.end(), fake.begin(), fake.end());
    }
    if (result.excluded.size() != round_messages.size()) {
      result.excluded.resize(round_messages.size(), false);
    }
    if (hook) hook(round, round_messages, result.excluded);

    surviving.clear();
    for (size_t u = 0; u < round_messages.size(); ++u) {
      if (!result.excluded[u]) surviving.push_back(round_messages[u]);
    }
    absl::StatusOr<PrivKvmMeans> round_means =
        PrivKvmAggregateMean(surviving, *mean_params, dict, options.aggregate);
    if (!round_means.ok()) return round_means.status();
    means = *std::move(round_means);
    for (int k = 0; k < d; ++k) {
      state.virtual_means[k] = std::clamp(means.mean[k], -1.0, 1.0);
    }

    if (round == 1 || options.keep_messages) {
      result.rounds.push_back(round_messages);
    }
  }

  // Frequencies come from round one, minus anybody excluded by the end.
  surviving.clear();
  const std::vector<PrivKvmMessage>& first = result.rounds.front();
  for (size_t u = 0; u < first.size(); ++u) {
    if (!result.excluded[u]) surviving.push_back(first[u]);
  }
  absl::StatusOr<EstimateTable> table = PrivKvmAggregateFrequency(
      surviving, *freq_params, dict, options.aggregate);
  if (!table.ok()) return table.status();
  table->mean = std::move(means.mean);
  table->mean_uncalibrated = std::move(means.mean_uncalibrated);
  result.table = *std::move(table);
  return result;
}

}  // namespace kvpoison
