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

#ifndef KVPOISON_PARAMS_H_
#define KVPOISON_PARAMS_H_

#include "absl/status/statusor.h"
#include "kvpoison/random.h"
#include "kvpoison/types.h"

namespace kvpoison {

enum class EstimationStage { kFrequency, kMean };

// Returns the (a, b, p, l) quadruple plugged into the unified estimators.
//
//   PCKV-UE:   a = 1/2, b = 2/(e^eps + 3), p = e^eps/(e^eps + 1), l = padding.
//   PCKV-GRR:  a = (l(e^eps-1)+2)/(l(e^eps-1)+2d'), b = (1-a)/(d'-1),
//              p = (l(e^eps-1)+1)/(l(e^eps-1)+2).
//   PrivKVM frequency stage: a = p = e^eps1/(e^eps1+1), b = 1/(e^eps1+1), l=1.
//   PrivKVM mean stage:      a = 1, b = 0, p = e^eps2/(e^eps2+1), l = 1.
//
// PCKV protocols use the full budget for both stages. The two PrivKVM stages
// produce different objects and must not be mixed.
absl::StatusOr<PerturbParams> DerivePerturbParams(Protocol protocol,
                                                  EstimationStage stage,
                                                  const PrivacyParams& privacy,
                                                  const Dictionary& dict);

// Returns +1 with probability (1 + v)/2 and -1 otherwise. Consumes exactly one
// engine draw.
absl::StatusOr<int> DiscretizeValue(double value, Rng& rng);

inline int DiscretizeUnchecked(double value, Rng& rng) {
  return UniformUnit(rng) < 0.5 * (1.0 + value) ? 1 : -1;
}

// e^eps/(e^eps + 1): the probability of keeping the true answer in binary
// randomized response.
double KeepProbability(double epsilon);

}  // namespace kvpoison

#endif  // KVPOISON_PARAMS_H_
