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

#ifndef KVPOISON_ATTACKS_H_
#define KVPOISON_ATTACKS_H_

#include "absl/status/statusor.h"
#include "kvpoison/random.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct AttackConfig {
  AttackKind attack = AttackKind::kM2ga;
  TargetSet targets;
  int num_fake = 0;  // m
};

struct CraftResult {
  MessageBatch messages;
  // M2GA/PCKV-UE only: messages whose 1-count or -1-count could not be made
  // to match a genuine reporter's expected counts.
  int disguise_violations = 0;
};

// Rounded expected number of +1 and -1 entries in the vector of a genuine
// PCKV-UE user reporting value +1: ap + (d'-1)b/2 and a(1-p) + (d'-1)b/2,
// both rounded half up.
struct UeDisguiseCounts {
  int ones = 0;
  int minus_ones = 0;
};
UeDisguiseCounts ExpectedUeDisguise(const PerturbParams& params,
                                    const Dictionary& dict);

// Target of fake user i under balanced round-robin assignment: the targets
// in ascending key order, cycled. Per-target counts differ by at most one and
// the lower keys absorb the remainder.
int BalancedTarget(const TargetSet& targets, int fake_index);

// Maximal gain attack.
//   PrivKVM: fake i reports <target(i), kp = 1, vp = 1>; identical every round.
//   PCKV-UE: every target coordinate is 1; filler +1/-1 entries are placed
//            uniformly among the other coordinates to match the expected
//            counts of a genuine vector.
//   PCKV-GRR: fake i sends <target(i), 1> unperturbed.
absl::StatusOr<CraftResult> CraftM2ga(Protocol protocol,
                                      const AttackConfig& config,
                                      const Dictionary& dict,
                                      const PrivacyParams& privacy, Rng& rng);

// Random message attack: a uniformly random message from the protocol's
// message domain.
//   PrivKVM: uniform key; <0,0> w.p. 1/2, <1,1> and <1,-1> w.p. 1/4 each.
//   PCKV-UE: each coordinate uniform over {-1, 0, 1}.
//   PCKV-GRR: uniform key in 1..d', uniform sign.
absl::StatusOr<CraftResult> CraftRma(Protocol protocol,
                                     const AttackConfig& config,
                                     const Dictionary& dict, Rng& rng);

// Random key-value attack: each fake user draws a target uniformly, pairs it
// with value 1 and perturbs it exactly like a genuine user holding only that
// pair (without PCKV padding; a PrivKVM fake always treats the key as held).
absl::StatusOr<CraftResult> CraftRkva(Protocol protocol,
                                      const AttackConfig& config,
                                      const Dictionary& dict,
                                      const PrivacyParams& privacy, Rng& rng);

// Dispatches on config.attack. For PrivKVM this crafts one round; callers
// invoke it once per round.
absl::StatusOr<CraftResult> CraftAttack(Protocol protocol,
                                        const AttackConfig& config,
                                        const Dictionary& dict,
                                        const PrivacyParams& privacy, Rng& rng);

}  // namespace kvpoison

#endif  // KVPOISON_ATTACKS_H_
