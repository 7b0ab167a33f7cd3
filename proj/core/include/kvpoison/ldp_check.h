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

#ifndef KVPOISON_LDP_CHECK_H_
#define KVPOISON_LDP_CHECK_H_

#include "absl/status/statusor.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct LdpReport {
  Protocol protocol = Protocol::kPrivKvm;
  double epsilon = 0.0;
  // e^epsilon, the guarantee being verified.
  double bound = 0.0;
  // For PrivKVM: e^(eps1 + eps2), the budget one round actually spends.
  double round_bound = 0.0;
  // Largest Pr[o | x] / Pr[o | x'] over all input pairs and outputs. Infinite
  // when some output is possible under one input and impossible under another.
  double max_ratio = 0.0;
  bool passed = false;
  int64_t input_pairs = 0;
  int64_t outputs = 0;
};

// Exhaustively enumerates the exact output distribution of a single report
// for every possible user input and checks the worst-case likelihood ratio
// against e^epsilon + tolerance.
//
// Inputs are all key sets over the d real keys in which every key is absent,
// held with value +1, or held with value -1. Output probabilities are affine
// in each held value, so the extreme values attain the worst ratio. PCKV-UE
// outputs are full d'-length vectors; PCKV-GRR outputs are the 2d' pairs;
// PrivKVM outputs are (key index, kp, vp) triples of one round, checked under
// every virtual-mean vector in {-1, 0, 1}^d.
//
// Requires d' <= 6 to keep the enumeration small.
absl::StatusOr<LdpReport> VerifyLdpGuarantee(Protocol protocol, double epsilon,
                                             const Dictionary& dict,
                                             int num_rounds = 1,
                                             double tolerance = 1e-9);

}  // namespace kvpoison

#endif  // KVPOISON_LDP_CHECK_H_
