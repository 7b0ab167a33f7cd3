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

#ifndef KVPOISON_PRIVKVM_H_
#define KVPOISON_PRIVKVM_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/random.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct AggregateOptions {
  // Clip frequencies into [1/n, 1] and support counts into their feasible
  // range before estimating means.
  bool clip = true;
};

// Server state carried between PrivKVM rounds. virtual_means[k - 1] is the
// previous round's mean estimate for key k (0 in the first round); users that
// do not hold a sampled key report a value drawn around it.
struct RoundState {
  int round_index = 1;
  std::vector<double> virtual_means;

  static RoundState Initial(int num_keys) {
    return RoundState{1, std::vector<double>(num_keys, 0.0)};
  }
};

struct PrivKvmSample {
  int key = 0;
  int v_star = 0;
  bool possessed = false;
};

// Samples a key uniformly from 1..d. Held keys contribute the user's own
// value, other keys the virtual mean; the result is discretized to +-1.
PrivKvmSample PrivKvmSampleUser(const UserRecordSet& user,
                                const RoundState& state,
                                const Dictionary& dict, Rng& rng);

// Flips v_star with probability 1/(1+e^value_eps), then keeps <1, v'> with
// probability e^key_eps/(1+e^key_eps) for a possessed key (otherwise <0, 0>),
// and the mirrored rule for keys the user does not hold. Always consumes two
// engine draws.
PrivKvmMessage PrivKvmPerturb(int key, int v_star, bool possessed,
                              double key_epsilon, double value_epsilon,
                              Rng& rng);
PrivKvmMessage PrivKvmPerturb(int key, int v_star, bool possessed,
                              const PrivacyParams& privacy, Rng& rng);

// n_k (messages with index k and kp = 1) plus the <1,1> / <1,-1> split.
SupportCounts CountPrivKvmSupports(std::span<const PrivKvmMessage> messages,
                                   const Dictionary& dict);

// Frequency estimate from first-round messages. Every user reports a single
// index drawn uniformly from d keys, so the fraction n_k/n is rescaled by d
// before inverting the key perturbation:
//
//   f_k = (p - 1 + d * n_k / n) / (2p - 1),   p = e^eps1/(e^eps1 + 1).
//
// `params` must be the frequency-stage parameters. Only the frequency columns
// of the returned table are filled.
absl::StatusOr<EstimateTable> PrivKvmAggregateFrequency(
    std::span<const PrivKvmMessage> messages, const PerturbParams& params,
    const Dictionary& dict, AggregateOptions options = {});

struct PrivKvmMeans {
  std::vector<double> mean;
  std::vector<double> mean_uncalibrated;
};

// Mean estimate of one round: n1' = ((p-1) n_k + n1)/(2p-1), likewise for
// n-1', optionally clipped into [0, n_k], and m_k = (n1' - n-1')/n_k. Keys
// nobody supports get mean 0. `params` must be the mean-stage parameters.
absl::StatusOr<PrivKvmMeans> PrivKvmAggregateMean(
    std::span<const PrivKvmMessage> messages, const PerturbParams& params,
    const Dictionary& dict, AggregateOptions options = {});

// Supplies the fake users' messages of one round (1-based round index).
using PrivKvmAdversary =
    std::function<std::vector<PrivKvmMessage>(int round, Rng& rng)>;

// Invoked after a round's messages are collected and before they are
// aggregated. Users are indexed genuine-first; setting excluded[u] drops user
// u from this and every later round's mean estimation and from the final
// frequency estimate.
using PrivKvmRoundHook = std::function<void(
    int round, std::span<const PrivKvmMessage> messages,
    std::vector<bool>& excluded)>;

struct PrivKvmRunOptions {
  AggregateOptions aggregate;
  bool keep_messages = false;
};

struct PrivKvmRunResult {
  // Frequencies from round one, means from the last round.
  EstimateTable table;
  // rounds[t][u]: message of user u in round t + 1. Always holds round one;
  // holds every round when keep_messages is set.
  std::vector<std::vector<PrivKvmMessage>> rounds;
  std::vector<bool> excluded;
};

// Runs the full iterative protocol. Genuine users draw from a per-round stream
// derived from `seed` and the adversary from a separate one, so two runs with
// the same seed share all genuine randomness whether or not fake users are
// present.
absl::StatusOr<PrivKvmRunResult> PrivKvmRun(
    const Dataset& dataset, const PrivacyParams& privacy,
    const Dictionary& dict, uint64_t seed,
    const PrivKvmAdversary& adversary = nullptr,
    const PrivKvmRoundHook& hook = nullptr, PrivKvmRunOptions options = {});

}  // namespace kvpoison

#endif  // KVPOISON_PRIVKVM_H_
