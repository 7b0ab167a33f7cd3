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

#ifndef KVPOISON_ANALYSIS_H_
#define KVPOISON_ANALYSIS_H_

#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/types.h"

namespace kvpoison {

// Inputs of the closed-form gain predictions. The predictions ignore
// clipping and treat beta as continuous.
struct AnalyticalContext {
  double beta = 0.05;    // m / n
  double epsilon = 1.0;
  int num_rounds = 10;   // PrivKVM N_iter
  int num_keys = 0;      // d
  int padding = 1;       // l
  // True frequency and mean of each target key; the target count r is the
  // vector length.
  std::vector<double> target_frequency;
  std::vector<double> target_mean;

  int r() const { return static_cast<int>(target_frequency.size()); }
  int padded_size() const { return num_keys + padding; }
  double total_target_frequency() const;
};

// Closed-form expected frequency gain of `attack` against `protocol`:
//
//                 PrivKVM (e1 = e^(eps/2))        PCKV-UE (E = e^eps)
//   M2GA   b'[1 - fT + (2 - r)/(e1 - 1)]         b'l[2r - fT + 4r/(E - 1)]
//   RMA    b'[(e1 - 2d + 1)r/(2(e1 - 1)d) - fT]  b'l[4Er/(3(E - 1)) - fT]
//   RKVA   b'[1 - fT + (1 - r)/(e1 - 1)]         b'l(1 - fT)
//
//                 PCKV-GRR
//   M2GA   b'[(1 - fT)l + 2(d' - r)/(E - 1)]
//   RMA    b'(r - fT d')l / d'
//   RKVA   b'l(1 - fT)
//
// with b' = beta/(1 + beta) and fT the summed target frequency.
absl::StatusOr<double> AnalyticalFrequencyGain(AttackKind attack,
                                               Protocol protocol,
                                               const AnalyticalContext& ctx);

// First-order approximation of the expected mean gain, a sum over targets of
// (numerator / denominator - m_k):
//
//   PrivKVM  M2GA  (f m r + beta (e2 + 1)/(e2 - 1)) / (f r + beta)
//            RMA   2 f m d / (2 f d + beta)
//            RKVA  (f m r (e1 + 1) + e1 beta) / (f r (e1 + 1) + e1 beta)
//   PCKV-UE  M2GA  (2 beta l (E + 1) + (E - 1) f m) / (2 beta l (E + 1) + (E - 1) f)
//            RMA   3(E - 1) f m / (3(E - 1) f + 4 E beta l)
//            RKVA  (f m r + beta l) / (f r + beta l)
//   PCKV-GRR M2GA  ((E - 1)(beta l + f m r) + 2 beta d') /
//                  (beta[(E - 1) l + 2(d' - r)] + (E - 1) f r)
//            RMA   f m d' / (f d' + beta l)
//            RKVA  (f m r + beta l) / (f r + beta l)
//
// e2 = e^(eps / (2 N_iter)) is the per-round value budget of PrivKVM.
absl::StatusOr<double> AnalyticalMeanGain(AttackKind attack, Protocol protocol,
                                          const AnalyticalContext& ctx);

// Expected supports injected into one target key, per fake user.
struct FakeSupports {
  double positive = 0.0;  // E[n~1] / m
  double negative = 0.0;  // E[n~-1] / m
};

// Expected fake supports of each target under the attack. For PrivKVM the
// frequency stage only sees positive + negative; the split uses the
// per-round value budget.
absl::StatusOr<FakeSupports> ExpectedFakeSupports(AttackKind attack,
                                                  Protocol protocol,
                                                  const AnalyticalContext& ctx);

// The generic frequency gain from per-target fake supports:
//   G_f = l/((1 + beta)(a - b)) * beta * r * (s1 + s-1) - c,
//   c = beta l/(1 + beta) * (fT + r b/(a - b)).
double FrequencyGainFromSupports(const PerturbParams& params,
                                 const AnalyticalContext& ctx,
                                 const FakeSupports& supports);

// The generic first-order mean gain from per-target fake supports:
//   sum_k (a - b)/(a(2p - 1)) * (f a(2p - 1) m / l + beta (s1 - s-1)) /
//         (f (a - b)/l + beta (s1 + s-1 - b)) - m.
double MeanGainFromSupports(const PerturbParams& params,
                            const AnalyticalContext& ctx,
                            const FakeSupports& supports);

// Expected frequency gain under this library's PrivKVM frequency estimator,
// which rescales each key's report count by d:
//   b'[d r (s1 + s-1)/(a - b) - fT - r b/(a - b)].
absl::StatusOr<double> PrivKvmSampledFrequencyGain(AttackKind attack,
                                                   const AnalyticalContext& ctx);

struct AllocationResult {
  int positive = 0;  // n~1
  int negative = 0;  // n~-1
  double mean = 0.0;  // m~ at the argmax
  // Signs of the partial derivatives of m~ at the argmax: d/dn~1 > 0 and
  // d/dn~-1 < 0 are the stationarity conditions for (m, 0).
  bool positive_slope = false;
  bool negative_slope = false;
  int evaluated = 0;
};

// Exhaustive search over integer allocations n~1 + n~-1 <= m of one target's
// post-attack mean
//   m~ = (a - b)/(a(2p - 1)) * (n1 - n-1 + n~1 - n~-1) /
//        (n1 + n-1 + n~1 + n~-1 - (n + m) b).
// Allocations with a non-positive denominator are skipped. Ties keep the
// first allocation in (n~1 descending, n~-1 ascending) order.
AllocationResult OptimalityOracle(int64_t n1, int64_t n_minus1, int m,
                                  const PerturbParams& params, int64_t n);

struct GainComparison {
  double empirical = 0.0;
  double standard_error = 0.0;
  double analytical = 0.0;
  double absolute_deviation = 0.0;
  double relative_deviation = 0.0;  // |emp - ana| / |ana|; inf when ana = 0
  // |emp - ana| in units of the standard error.
  double z = 0.0;
  bool approximate = false;  // mean comparisons rest on an approximation
};

GainComparison CompareGain(double empirical, double standard_error,
                           double analytical, bool approximate);

}  // namespace kvpoison

#endif  // KVPOISON_ANALYSIS_H_
