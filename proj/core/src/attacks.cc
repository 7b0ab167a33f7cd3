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

#include "kvpoison/attacks.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "kvpoison/params.h"
#include "kvpoison/pckv.h"
#include "kvpoison/privkvm.h"

namespace kvpoison {
namespace {

absl::Status CheckConfig(const AttackConfig& config, const Dictionary& dict) {
  if (config.num_fake < 0) {
    return absl::InvalidArgumentError("number of fake users must be >= 0");
  }
  if (config.targets.size() == 0) {
    return absl::InvalidArgumentError("target set is empty");
  }
  if (config.targets.size() > dict.num_keys() ||
      config.targets.keys().back() > dict.num_keys()) {
    return absl::InvalidArgumentError(
        absl::StrCat("targets must be r <= d = ", dict.num_keys(),
                     " keys within 1..d"));
  }
  return absl::OkStatus();
}

int RoundHalfUp(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Moves `count` uniformly chosen elements of `pool` to its front.
void PartialShuffle(std::vector<int>& pool, int count, Rng& rng) {
  const int size = static_cast<int>(pool.size());
  for (int i = 0; i < count && i < size - 1; ++i) {
    std::swap(pool[i], pool[UniformInt(rng, i, size - 1)]);
  }
}

}  // namespace

UeDisguiseCounts ExpectedUeDisguise(const PerturbParams& params,
                                    const Dictionary& dict) {
  const double others = 0.5 * (dict.padded_size() - 1) * params.b;
  return UeDisguiseCounts{RoundHalfUp(params.a * params.p + others),
                          RoundHalfUp(params.a * (1.0 - params.p) + others)};
}

int BalancedTarget(const TargetSet& targets, int fake_index) {
  return targets.keys()[fake_index % targets.size()];
}

absl::StatusOr<CraftResult> CraftM2ga(Protocol protocol,
                                      const AttackConfig& config,
                                      const Dictionary& dict,
                                      const PrivacyParams& privacy, Rng& rng) {
  if (absl::Status s = CheckConfig(config, dict); !s.ok()) return s;
  const int m = config.num_fake;
  CraftResult result;
  switch (protocol) {
    case Protocol::kPrivKvm: {
      std::vector<PrivKvmMessage> out(m);
      for (int i = 0; i < m; ++i) {
        out[i] = PrivKvmMessage{BalancedTarget(config.targets, i), 1, 1};
      }
      result.messages = std::move(out);
      return result;
    }
    case Protocol::kPckvGrr: {
      std::vector<GrrPair> out(m);
      for (int i = 0; i < m; ++i) {
        out[i] = GrrPair{BalancedTarget(config.targets, i), 1};
      }
      result.messages = std::move(out);
      return result;
    }
    case Protocol::kPckvUe: {
      absl::StatusOr<PerturbParams> params = DerivePerturbParams(
          protocol, EstimationStage::kFrequency, privacy, dict);
      if (!params.ok()) return params.status();
      const UeDisguiseCounts expected = ExpectedUeDisguise(*params, dict);
      const int width = dict.padded_size();
      const int r = config.targets.size();
      std::vector<int> others;
      others.reserve(width - r);
      for (int key = 1; key <= width; ++key) {
        if (key > dict.num_keys() || !config.targets.Contains(key)) {
          others.push_back(key);
        }
      }
      int filler_ones = expected.ones - r;
      int filler_minus = expected.minus_ones;
      bool violation = filler_ones < 0;
      if (filler_ones < 0) filler_ones = 0;
      const int room = static_cast<int>(others.size());
      if (filler_ones + filler_minus > room) {
        violation = true;
        filler_ones = std::min(filler_ones, room);
        filler_minus = room - filler_ones;
      }
      std::vector<UeVector> out(m);
      for (int i = 0; i < m; ++i) {
        UeVector& y = out[i];
        y.bits.assign(width, 0);
        for (int key : config.targets.keys()) y.bits[key - 1] = 1;
        PartialShuffle(others, filler_ones + filler_minus, rng);
        for (int j = 0; j < filler_ones; ++j) y.bits[others[j] - 1] = 1;
        for (int j = 0; j < filler_minus; ++j) {
          y.bits[others[filler_ones + j] - 1] = -1;
        }
      }
      result.disguise_violations = violation ? m : 0;
      result.messages = std::move(out);
      return result;
    }
  }
  return absl::InvalidArgumentError("unknown protocol");
}

absl::StatusOr<CraftResult> CraftRma(Protocol protocol,
                                     const AttackConfig& config,
                                     const Dictionary& dict, Rng& rng) {
  if (config.num_fake < 0) {
    return absl::InvalidArgumentError("number of fake users must be >= 0");
  }
  const int m = config.num_fake;
  CraftResult result;
  switch (protocol) {
    case Protocol::kPrivKvm: {
      std::vector<PrivKvmMessage> out(m);
      for (int i = 0; i < m; ++i) {
        const int key = UniformInt(rng, 1, dict.num_keys());
        const double u = UniformUnit(rng);
        if (u < 0.5) {
          out[i] = PrivKvmMessage{key, 0, 0};
        } else {
          out[i] = PrivKvmMessage{key, 1, static_cast<int8_t>(u < 0.75 ? 1 : -1)};
        }
      }
      result.messages = std::move(out);
      return result;
    }
    case Protocol::kPckvUe: {
      std::vector<UeVector> out(m);
      for (int i = 0; i < m; ++i) {
        out[i].bits.resize(dict.padded_size());
        for (int8_t& bit : out[i].bits) {
          bit = static_cast<int8_t>(UniformInt(rng, -1, 1));
        }
      }
      result.messages = std::move(out);
      return result;
    }
    case Protocol::kPckvGrr: {
      std::vector<GrrPair> out(m);
      for (int i = 0; i < m; ++i) {
        const int key = UniformInt(rng, 1, dict.padded_size());
        out[i] = GrrPair{key, static_cast<int8_t>(Bernoulli(rng, 0.5) ? 1 : -1)};
      }
      result.messages = std::move(out);
      return result;
    }
  }
  return absl::InvalidArgumentError("unknown protocol");
}

absl::StatusOr<CraftResult> CraftRkva(Protocol protocol,
                                      const AttackConfig& config,
                                      const Dictionary& dict,
                                      const PrivacyParams& privacy, Rng& rng) {
  if (absl::Status s = CheckConfig(config, dict); !s.ok()) return s;
  const int m = config.num_fake;
  const int r = config.targets.size();
  CraftResult result;
  if (protocol == Protocol::kPrivKvm) {
    std::vector<PrivKvmMessage> out(m);
    for (int i = 0; i < m; ++i) {
      const int key = config.targets.keys()[UniformInt(rng, 0, r - 1)];
      out[i] = PrivKvmPerturb(key, 1, /*possessed=*/true, privacy, rng);
    }
    result.messages = std::move(out);
    return result;
  }
  absl::StatusOr<PerturbParams> params =
      DerivePerturbParams(protocol, EstimationStage::kFrequency, privacy, dict);
  if (!params.ok()) return params.status();
  if (protocol == Protocol::kPckvUe) {
    std::vector<UeVector> out(m);
    for (int i = 0; i < m; ++i) {
      const int key = config.targets.keys()[UniformInt(rng, 0, r - 1)];
      out[i] = PckvUePerturb(key, 1, *params, dict, rng);
    }
    result.messages = std::move(out);
    return result;
  }
  std::vector<GrrPair> out(m);
  for (int i = 0; i < m; ++i) {
    const int key = config.targets.keys()[UniformInt(rng, 0, r - 1)];
    out[i] = PckvGrrPerturb(key, 1, *params, dict, rng);
  }
  result.messages = std::move(out);
  return result;
}

absl::StatusOr<CraftResult> CraftAttack(Protocol protocol,
                                        const AttackConfig& config,
                                        const Dictionary& dict,
                                        const PrivacyParams& privacy,
                                        Rng& rng) {
  switch (config.attack) {
    case AttackKind::kM2ga:
      return CraftM2ga(protocol, config, dict, privacy, rng);
    case AttackKind::kRma:
      return CraftRma(protocol, config, dict, rng);
    case AttackKind::kRkva:
      return CraftRkva(protocol, config, dict, privacy, rng);
    case AttackKind::kNone:
      break;
  }
  return absl::InvalidArgumentError("no attack selected");
}

}  // namespace kvpoison
