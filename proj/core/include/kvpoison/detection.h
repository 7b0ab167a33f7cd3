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

#ifndef KVPOISON_DETECTION_H_
#define KVPOISON_DETECTION_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/isolation_forest.h"
#include "kvpoison/privkvm.h"
#include "kvpoison/random.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct DefenseConfig {
  DefenseKind kind = DefenseKind::kNone;
  // Fraction of genuine users whose identity the server knows (OC).
  double lambda = 0.1;
  // Anomaly threshold (AS).
  int eta = 2;
  ForestConfig forest;
  // OC splits users at this isolation score.
  double score_threshold = 0.5;
};

// One feature row per user, in message order.
//   PrivKVM: (key/d, kp, vp) for each round, concatenated.
//   PCKV-UE: the d' vector entries.
//   PCKV-GRR: (key, value).
FeatureMatrix PrivKvmFeatures(
    std::span<const std::vector<PrivKvmMessage>> rounds, const Dictionary& dict);
FeatureMatrix UeFeatures(std::span<const UeVector> messages,
                         const Dictionary& dict);
FeatureMatrix GrrFeatures(std::span<const GrrPair> messages);

// Draws max(1, round(lambda * num_genuine)) distinct genuine user indices in
// [0, num_genuine), sorted.
absl::StatusOr<std::vector<int>> SampleKnownGenuine(int num_genuine,
                                                    double lambda, Rng& rng);

struct OneClassResult {
  std::vector<double> scores;
  std::vector<bool> detected;
  // False when thresholding left one group empty; nothing is detected then.
  bool split_found = false;
};

// Fits an isolation forest to all users, splits them into scores >= threshold
// and below, and labels as genuine the group holding more of the known
// genuine users (the larger group on a tie). The other group is detected.
absl::StatusOr<OneClassResult> OneClassDetect(const FeatureMatrix& features,
                                              std::span<const int> known_genuine,
                                              const DefenseConfig& config);

// Cross-round key repetition counts of PrivKVM users. The score of a user is
// the largest number of rounds in which it reported the same key index.
class AnomalyState {
 public:
  static absl::StatusOr<AnomalyState> Create(Protocol protocol, int num_users,
                                             const Dictionary& dict);

  // Folds in one round; messages[u] belongs to user u.
  absl::Status Update(std::span<const PrivKvmMessage> messages);

  int rounds_seen() const { return rounds_; }
  int score(int user) const { return scores_[user]; }
  const std::vector<int>& scores() const { return scores_; }

 private:
  AnomalyState(int num_users, int num_keys)
      : num_keys_(num_keys),
        counts_(static_cast<size_t>(num_users) * num_keys, 0),
        scores_(num_users, 0) {}

  int num_keys_;
  int rounds_ = 0;
  std::vector<uint16_t> counts_;
  std::vector<int> scores_;
};

// Flags users whose score reached eta and were not flagged yet; returns the
// newly flagged indices in ascending order.
absl::StatusOr<std::vector<int>> AnomalyDetect(const AnomalyState& state,
                                               int eta,
                                               std::vector<bool>& flagged);

// Re-runs aggregation over the users not excluded, with n set to the survivor
// count. `rounds` holds one batch for PCKV; for PrivKVM frequencies come from
// the first batch and means from the last.
absl::StatusOr<EstimateTable> ReaggregateExcluding(
    Protocol protocol, std::span<const MessageBatch> rounds,
    const std::vector<bool>& excluded, const PrivacyParams& privacy,
    const Dictionary& dict, AggregateOptions options = {});

}  // namespace kvpoison

#endif  // KVPOISON_DETECTION_H_
