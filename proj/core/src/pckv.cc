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

#include "kvpoison/pckv.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "kvpoison/params.h"

namespace kvpoison {

PckvSample PckvSampleUser(const UserRecordSet& user, const Dictionary& dict,
                          Rng& rng) {
  const int held = static_cast<int>(user.records.size());
  const int padded = std::max(held, dict.padding());
  const int pick = UniformInt(rng, 0, padded - 1);
  PckvSample sample;
  double value = 0.0;
  if (pick < held) {
    sample.key = user.records[pick].key;
    value = user.records[pick].value;
  } else {
    sample.key = dict.num_keys() + 1 + (pick - held);
  }
  sample.v_star = DiscretizeUnchecked(value, rng);
  return sample;
}

UeVector PckvUePerturb(int key, int v_star, const PerturbParams& params,
                       const Dictionary& dict, Rng& rng) {
  UeVector out;
  out.bits.resize(dict.padded_size());
  const double keep = params.a * params.p;
  const double half_b = 0.5 * params.b;
  for (int i = 0; i < dict.padded_size(); ++i) {
    const double u = UniformUnit(rng);
    int8_t bit = 0;
    if (i == key - 1) {
      if (u < keep) {
        bit = static_cast<int8_t>(v_star);
      } else if (u < params.a) {
        bit = static_cast<int8_t>(-v_star);
      }
    } else if (u < half_b) {
      bit = 1;
    } else if (u < params.b) {
      bit = -1;
    }
    out.bits[i] = bit;
  }
  return out;
}

GrrPair PckvGrrPerturb(int key, int v_star, const PerturbParams& params,
                       const Dictionary& dict, Rng& rng) {
  const double u = UniformUnit(rng);
  // Drawn unconditionally so every call uses the same number of draws.
  int other = UniformInt(rng, 1, dict.padded_size() - 1);
  const int8_t sign = Bernoulli(rng, 0.5) ? 1 : -1;
  if (u < params.a * params.p) return GrrPair{key, static_cast<int8_t>(v_star)};
  if (u < params.a) return GrrPair{key, static_cast<int8_t>(-v_star)};
  if (other >= key) ++other;
  return GrrPair{other, sign};
}

std::vector<UeVector> PckvUeCollect(const Dataset& dataset,
                                    const PerturbParams& params,
                                    const Dictionary& dict, Rng& rng) {
  std::vector<UeVector> out;
  out.reserve(dataset.users.size());
  for (const UserRecordSet& user : dataset.users) {
    const PckvSample s = PckvSampleUser(user, dict, rng);
    out.push_back(PckvUePerturb(s.key, s.v_star, params, dict, rng));
  }
  return out;
}

std::vector<GrrPair> PckvGrrCollect(const Dataset& dataset,
                                    const PerturbParams& params,
                                    const Dictionary& dict, Rng& rng) {
  std::vector<GrrPair> out;
  out.reserve(dataset.users.size());
  for (const UserRecordSet& user : dataset.users) {
    const PckvSample s = PckvSampleUser(user, dict, rng);
    out.push_back(PckvGrrPerturb(s.key, s.v_star, params, dict, rng));
  }
  return out;
}

SupportCounts CountUeSupports(std::span<const UeVector> messages,
                              const Dictionary& dict) {
  const int width = dict.padded_size();
  SupportCounts counts;
  counts.num_users = static_cast<int64_t>(messages.size());
  counts.positive.assign(width, 0);
  counts.negative.assign(width, 0);
  for (const UeVector& y : messages) {
    const int len = std::min<int>(width, static_cast<int>(y.bits.size()));
    for (int i = 0; i < len; ++i) {
      counts.positive[i] += y.bits[i] == 1;
      counts.negative[i] += y.bits[i] == -1;
    }
  }
  return counts;
}

SupportCounts CountGrrSupports(std::span<const GrrPair> messages,
                               const Dictionary& dict) {
  const int width = dict.padded_size();
  SupportCounts counts;
  counts.num_users = static_cast<int64_t>(messages.size());
  counts.positive.assign(width, 0);
  counts.negative.assign(width, 0);
  for (const GrrPair& g : messages) {
    if (g.key < 1 || g.key > width) continue;
    if (g.value == 1) ++counts.positive[g.key - 1];
    if (g.value == -1) ++counts.negative[g.key - 1];
  }
  return counts;
}

absl::StatusOr<EstimateTable> PckvEstimate(const SupportCounts& counts,
                                           const PerturbParams& params,
                                           const Dictionary& dict,
                                           AggregateOptions options) {
  if (counts.num_users <= 0) {
    return absl::InvalidArgumentError("no messages to aggregate");
  }
  const int d = dict.num_keys();
  if (static_cast<int>(counts.positive.size()) < d ||
      static_cast<int>(counts.negative.size()) < d) {
    return absl::InvalidArgumentError("support counts do not cover d keys");
  }
  const double a = params.a;
  const double b = params.b;
  const double p = params.p;
  const double l = params.padding;
  if (!(a > b)) {
    return absl::InvalidArgumentError("frequency estimator requires a > b");
  }
  const double diag = a * p - 0.5 * b;
  const double off = a * (1.0 - p) - 0.5 * b;
  const double det = diag * diag - off * off;
  if (std::abs(det) < 1e-300) {
    return absl::FailedPreconditionError("support matrix A is singular");
  }
  const double n = static_cast<double>(counts.num_users);

  EstimateTable table;
  table.frequency.resize(d);
  table.mean.resize(d);
  table.mean_uncalibrated.resize(d);
  table.frequency_clipped.assign(d, false);
  for (int k = 0; k < d; ++k) {
    const double n1 = static_cast<double>(counts.positive[k]);
    const double n2 = static_cast<double>(counts.negative[k]);
    double f = l * ((n1 + n2) / n - b) / (a - b);
    if (options.clip) {
      const double clipped = std::clamp(f, 1.0 / n, 1.0);
      table.frequency_clipped[k] = clipped != f;
      f = clipped;
    }
    const double r1 = n1 - 0.5 * n * b;
    const double r2 = n2 - 0.5 * n * b;
    double pos = (diag * r1 - off * r2) / det;
    double neg = (diag * r2 - off * r1) / det;
    if (options.clip) {
      const double cap = n * f / l;
      pos = std::clamp(pos, 0.0, cap);
      neg = std::clamp(neg, 0.0, cap);
    }
    const double m = f == 0.0 ? 0.0 : l * (pos - neg) / (n * f);
    table.frequency[k] = f;
    table.mean_uncalibrated[k] = m;
    table.mean[k] = options.clip ? std::clamp(m, -1.0, 1.0) : m;
  }
  return table;
}

}  // namespace kvpoison
