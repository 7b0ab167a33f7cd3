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

#ifndef KVPOISON_TYPES_H_
#define KVPOISON_TYPES_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace kvpoison {

enum class Protocol { kPrivKvm, kPckvUe, kPckvGrr };
enum class AttackKind { kNone, kM2ga, kRma, kRkva };
enum class DefenseKind { kNone, kOneClass, kAnomalyScore };

absl::string_view ProtocolName(Protocol protocol);
absl::string_view AttackName(AttackKind attack);
absl::string_view DefenseName(DefenseKind defense);

// Accepts the canonical names ("privkvm", "pckv-ue", "pckv-grr", ...) case
// insensitively; underscores are treated as dashes.
absl::StatusOr<Protocol> ParseProtocol(absl::string_view name);
absl::StatusOr<AttackKind> ParseAttack(absl::string_view name);
absl::StatusOr<DefenseKind> ParseDefense(absl::string_view name);

// A single key-value pair. Keys are 1-based; keys above d are dummy keys used
// by PCKV padding.
struct KvRecord {
  int key = 0;
  double value = 0.0;

  friend bool operator==(const KvRecord&, const KvRecord&) = default;
};

// The set of pairs held by one user. Records are kept sorted by key with no
// duplicates.
struct UserRecordSet {
  int64_t user_id = 0;
  std::vector<KvRecord> records;

  // Returns the index of `key` in `records`, or -1.
  int Find(int key) const;
};

struct Dataset {
  int num_keys = 0;  // d
  std::vector<UserRecordSet> users;

  int64_t num_users() const { return static_cast<int64_t>(users.size()); }
};

// Validates the set invariants: keys within 1..num_keys, strictly increasing
// within each user, values within [-1, 1].
absl::Status ValidateDataset(const Dataset& dataset);

class Dictionary {
 public:
  static absl::StatusOr<Dictionary> Create(int num_keys, int padding);

  int num_keys() const { return num_keys_; }       // d
  int padding() const { return padding_; }         // l
  int padded_size() const { return num_keys_ + padding_; }  // d' = d + l

 private:
  Dictionary(int num_keys, int padding)
      : num_keys_(num_keys), padding_(padding) {}

  int num_keys_;
  int padding_;
};

// Total budget and the PrivKVM split: half for key perturbation in the first
// round, the other half spread evenly over the value perturbation of every
// round.
class PrivacyParams {
 public:
  static absl::StatusOr<PrivacyParams> Create(double epsilon, int num_rounds);

  double epsilon() const { return epsilon_; }
  int num_rounds() const { return num_rounds_; }
  double key_epsilon() const { return epsilon_ / 2.0; }
  double value_epsilon() const { return epsilon_ / (2.0 * num_rounds_); }

 private:
  PrivacyParams(double epsilon, int num_rounds)
      : epsilon_(epsilon), num_rounds_(num_rounds) {}

  double epsilon_;
  int num_rounds_;
};

// The (a, b, p, l) parameters of the unified frequency/mean estimators.
struct PerturbParams {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  int padding = 1;
};

// PrivKVM wire unit: the sampled key index in clear plus the perturbed
// <kp, vp> tuple.
struct PrivKvmMessage {
  int key = 0;
  int8_t kp = 0;
  int8_t vp = 0;

  friend bool operator==(const PrivKvmMessage&, const PrivKvmMessage&) = default;
};

// PCKV-UE wire unit. bits[i] describes key i + 1; values in {-1, 0, 1}.
struct UeVector {
  std::vector<int8_t> bits;

  friend bool operator==(const UeVector&, const UeVector&) = default;
};

// PCKV-GRR wire unit.
struct GrrPair {
  int key = 0;
  int8_t value = 0;

  friend bool operator==(const GrrPair&, const GrrPair&) = default;
};

using Message = std::variant<PrivKvmMessage, UeVector, GrrPair>;

// A homogeneous batch of messages from one protocol.
using MessageBatch = std::variant<std::vector<PrivKvmMessage>,
                                  std::vector<UeVector>, std::vector<GrrPair>>;

// Structural validation of a message against the dictionary. PrivKVM keys
// range over 1..d; PCKV keys and vector lengths over 1..d'.
absl::Status ValidateMessage(const Message& message, const Dictionary& dict);

// Per-key support counts. Vectors are indexed by key - 1 and cover d' keys for
// PCKV, d keys for PrivKVM. `reported` is only filled for PrivKVM and counts
// messages carrying the key index with kp = 1.
struct SupportCounts {
  int64_t num_users = 0;
  std::vector<int64_t> positive;
  std::vector<int64_t> negative;
  std::vector<int64_t> reported;
};

// Server-side estimates for the d real keys, indexed by key - 1.
// `mean_uncalibrated` is the mean before the final clamp into [-1, 1]; with
// clipping enabled the two agree.
struct EstimateTable {
  std::vector<double> frequency;
  std::vector<double> mean;
  std::vector<double> mean_uncalibrated;
  std::vector<bool> frequency_clipped;

  int num_keys() const { return static_cast<int>(frequency.size()); }
};

// r distinct target keys, each within 1..d, kept in ascending order.
class TargetSet {
 public:
  // An empty set; only Create() produces a usable one.
  TargetSet() = default;
  static absl::StatusOr<TargetSet> Create(std::vector<int> keys, int num_keys);

  const std::vector<int>& keys() const { return keys_; }
  int size() const { return static_cast<int>(keys_.size()); }
  bool Contains(int key) const;

 private:
  explicit TargetSet(std::vector<int> keys) : keys_(std::move(keys)) {}

  std::vector<int> keys_;
};

}  // namespace kvpoison

#endif  // KVPOISON_TYPES_H_
