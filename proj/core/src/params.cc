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

#include "kvpoison/params.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace kvpoison {

double KeepProbability(double epsilon) {
  // 1/(1 + e^-eps) stays finite for large budgets.
  return 1.0 / (1.0 + std::exp(-epsilon));
}

absl::StatusOr<PerturbParams> DerivePerturbParams(Protocol protocol,
                                                  EstimationStage stage,
                                                  const PrivacyParams& privacy,
                                                  const Dictionary& dict) {
  const double eps = privacy.epsilon();
  PerturbParams params;
  switch (protocol) {
    case Protocol::kPrivKvm: {
      params.padding = 1;
      if (stage == EstimationStage::kFrequency) {
        params.p = KeepProbability(privacy.key_epsilon());
        params.a = params.p;
        params.b = 1.0 - params.p;
      } else {
        params.a = 1.0;
        params.b = 0.0;
        params.p = KeepProbability(privacy.value_epsilon());
      }
      return params;
    }
    case Protocol::kPckvUe: {
      params.padding = dict.padding();
      params.a = 0.5;
      params.b = 2.0 / (std::exp(eps) + 3.0);
      params.p = KeepProbability(eps);
      return params;
    }
    case Protocol::kPckvGrr: {
      const int d_prime = dict.padded_size();
      if (d_prime < 2) {
        return absl::InvalidArgumentError(
            absl::StrCat("PCKV-GRR needs d' >= 2, got ", d_prime));
      }
      const double scaled = dict.padding() * std::expm1(eps);  // l(e^eps - 1)
      params.padding = dict.padding();
      params.a = (scaled + 2.0) / (scaled + 2.0 * d_prime);
      params.b = (1.0 - params.a) / (d_prime - 1);
      params.p = (scaled + 1.0) / (scaled + 2.0);
      return params;
    }
  }
  return absl::InvalidArgumentError("unknown protocol");
}

absl::StatusOr<int> DiscretizeValue(double value, Rng& rng) {
  if (!(std::abs(value) <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("value ", value, " outside [-1, 1]"));
  }
  return DiscretizeUnchecked(value, rng);
}

}  // namespace kvpoison
