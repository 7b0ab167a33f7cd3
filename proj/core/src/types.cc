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

#include "kvpoison/types.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace kvpoison {
namespace {

std::string Normalize(absl::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '_') c = '-';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

absl::string_view ProtocolName(Protocol protocol) {
  switch (protocol) {
    case Protocol::kPrivKvm:
      return "privkvm";
    case Protocol::kPckvUe:
      return "pckv-ue";
    case Protocol::kPckvGrr:
      return "pckv-grr";
  }
  return "unknown";
}

absl::string_view AttackName(AttackKind attack) {
  switch (attack) {
    case AttackKind::kNone:
      return "none";
    case AttackKind::kM2ga:
      return "m2ga";
    case AttackKind::kRma:
      return "rma";
    case AttackKind::kRkva:
      return "rkva";
  }
  return "unknown";
}

absl::string_view DefenseName(DefenseKind defense) {
  switch (defense) {
    case DefenseKind::kNone:
      return "none";
    case DefenseKind::kOneClass:
      return "oc";
    case DefenseKind::kAnomalyScore:
      return "as";
  }
  return "unknown";
}

absl::StatusOr<Protocol> ParseProtocol(absl::string_view name) {
  const std::string n = Normalize(name);
  if (n == "privkvm") return Protocol::kPrivKvm;
  if (n == "pckv-ue" || n == "ue") return Protocol::kPckvUe;
  if (n == "pckv-grr" || n == "grr") return Protocol::kPckvGrr;
  return absl::InvalidArgumentError(absl::StrCat("unknown protocol: ", name));
}

absl::StatusOr<AttackKind> ParseAttack(absl::string_view name) {
  const std::string n = Normalize(name);
  if (n == "none" || n.empty()) return AttackKind::kNone;
  if (n == "m2ga") return AttackKind::kM2ga;
  if (n == "rma") return AttackKind::kRma;
  if (n == "rkva") return AttackKind::kRkva;
  return absl::InvalidArgumentError(absl::StrCat("unknown attack: ", name));
}

absl::StatusOr<DefenseKind> ParseDefense(absl::string_view name) {
  const std::string n = Normalize(name);
  if (n == "none" || n.empty()) return DefenseKind::kNone;
  if (n == "oc") return DefenseKind::kOneClass;
  if (n == "as") return DefenseKind::kAnomalyScore;
  return absl::InvalidArgumentError(absl::StrCat("unknown defense: ", name));
}

int UserRecordSet::Find(int key) const {
  auto it = std::lower_bound(
      records.begin(), records.end(), key,
      [](const KvRecord& r, int k) { return r.key < k; });
  if (it == records.end() || it->key != key) return -1;
  return static_cast<int>(it - records.begin());
}

absl::Status ValidateDataset(const Dataset& dataset) {
  if (dataset.num_keys < 1) {
    return absl::InvalidArgumentError("dataset must have at least one key");
  }
  for (const UserRecordSet& user : dataset.users) {
    int previous = 0;
    for (const KvRecord& record : user.records) {
      if (record.key < 1 || record.key > dataset.num_keys) {
        return absl::InvalidArgumentError(
            absl::StrCat("user ", user.user_id, ": key ", record.key,
                         " outside 1..", dataset.num_keys));
      }
      if (record.key <= previous) {
        return absl::InvalidArgumentError(absl::StrCat(
            "user ", user.user_id, ": keys not strictly increasing"));
      }
      if (!(std::abs(record.value) <= 1.0)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "user ", user.user_id, ": value ", record.value,
            " outside [-1, 1]"));
      }
      previous = record.key;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Dictionary> Dictionary::Create(int num_keys, int padding) {
  if (num_keys < 1) {
    return absl::InvalidArgumentError("dictionary needs d >= 1");
  }
  if (padding < 1) {
    return absl::InvalidArgumentError("padding length must be >= 1");
  }
  return Dictionary(num_keys, padding);
}

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    int num_rounds) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (num_rounds < 1) {
    return absl::InvalidArgumentError("number of rounds must be >= 1");
  }
  return PrivacyParams(epsilon, num_rounds);
}

absl::Status ValidateMessage(const Message& message, const Dictionary& dict) {
  if (const auto* m = std::get_if<PrivKvmMessage>(&message)) {
    if (m->key < 1 || m->key > dict.num_keys()) {
      return absl::InvalidArgumentError("PrivKVM key index out of range");
    }
    if (m->kp != 0 && m->kp != 1) {
      return absl::InvalidArgumentError("PrivKVM kp must be 0 or 1");
    }
    if (m->kp == 0 && m->vp != 0) {
      return absl::InvalidArgumentError("PrivKVM kp = 0 requires vp = 0");
    }
    if (m->kp == 1 && m->vp != 1 && m->vp != -1) {
      return absl::InvalidArgumentError("PrivKVM kp = 1 requires vp = +-1");
    }
    return absl::OkStatus();
  }
  if (const auto* v = std::get_if<UeVector>(&message)) {
    if (static_cast<int>(v->bits.size()) != dict.padded_size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("UE vector length ", v->bits.size(), " != d' = ",
                       dict.padded_size()));
    }
    for (int8_t bit : v->bits) {
      if (bit < -1 || bit > 1) {
        return absl::InvalidArgumentError("UE entries must be in {-1,0,1}");
      }
    }
    return absl::OkStatus();
  }
  const auto& g = std::get<GrrPair>(message);
  if (g.key < 1 || g.key > dict.padded_size()) {
    return absl::InvalidArgumentError("GRR key out of range");
  }
  if (g.value != 1 && g.value != -1) {
    return absl::InvalidArgumentError("GRR value must be +-1");
  }
  return absl::OkStatus();
}

absl::StatusOr<TargetSet> TargetSet::Create(std::vector<int> keys,
                                            int num_keys) {
  if (keys.empty()) {
    return absl::InvalidArgumentError("target set must not be empty");
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    return absl::InvalidArgumentError("target keys must be distinct");
  }
  if (keys.front() < 1 || keys.back() > num_keys) {
    return absl::InvalidArgumentError(
        absl::StrCat("target keys must lie in 1..", num_keys));
  }
  return TargetSet(std::move(keys));
}

bool TargetSet::Contains(int key) const {
  return std::binary_search(keys_.begin(), keys_.end(), key);
}

}  // namespace kvpoison
