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

#ifndef KVPOISON_PCKV_H_
#define KVPOISON_PCKV_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/privkvm.h"
#include "kvpoison/random.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct PckvSample {
  int key = 0;  // 1..d', keys above d are dummies
  int v_star = 0;
};

// Padding-and-sampling: a user holding fewer than l pairs is padded with
// dummy pairs <d+1, 0>, <d+2, 0>, ... up to l pairs; one pair is then drawn
// uniformly and its value discretized.
PckvSample PckvSampleUser(const UserRecordSet& user, const Dictionary& dict,
                          Rng& rng);

// Unary encoding over d' coordinates. The sampled coordinate carries v_star
// w.p. a*p, -v_star w.p. a*(1-p) and 0 otherwise; every other coordinate is
// +1 or -1 w.p. b/2 each. Consumes one draw per coordinate.
UeVector PckvUePerturb(int key, int v_star, const PerturbParams& params,
                       const Dictionary& dict, Rng& rng);

// Generalized randomized response over d' keys. Keeps <k, v*> w.p. a*p,
// flips to <k, -v*> w.p. a*(1-p), and otherwise reports a uniformly chosen
// other key with a uniform sign. Consumes three draws.
GrrPair PckvGrrPerturb(int key, int v_star, const PerturbParams& params,
                       const Dictionary& dict, Rng& rng);

// Runs Sample + Perturb for every user of the dataset, in user order.
std::vector<UeVector> PckvUeCollect(const Dataset& dataset,
                                    const PerturbParams& params,
                                    const Dictionary& dict, Rng& rng);
std::vector<GrrPair> PckvGrrCollect(const Dataset& dataset,
                                    const PerturbParams& params,
                                    const Dictionary& dict, Rng& rng);

// Per-key supports over all d' keys. A UE vector supports <k, +-1> when
// bits[k-1] = +-1, so one vector may support many keys; a GRR pair supports
// exactly the pair it carries.
SupportCounts CountUeSupports(std::span<const UeVector> messages,
                              const Dictionary& dict);
SupportCounts CountGrrSupports(std::span<const GrrPair> messages,
                               const Dictionary& dict);

// Frequency and mean estimates for the d real keys:
//
//   f_k = l * ((n1 + n-1)/n - b) / (a - b)
//   [n1', n-1']^T = A^-1 [n1 - nb/2, n-1 - nb/2]^T,
//       A = [[ap - b/2, a(1-p) - b/2], [a(1-p) - b/2, ap - b/2]]
//   m_k = l * (n1' - n-1') / (n * f_k)
//
// With clipping, f_k is clamped into [1/n, 1] first and the supports into
// [0, n * f_k / l] against the clamped frequency.
absl::StatusOr<EstimateTable> PckvEstimate(const SupportCounts& counts,
                                           const PerturbParams& params,
                                           const Dictionary& dict,
                                           AggregateOptions options = {});

}  // namespace kvpoison

#endif  // KVPOISON_PCKV_H_
