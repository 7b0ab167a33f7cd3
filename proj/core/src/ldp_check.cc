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

#include "kvpoison/ldp_check.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "kvpoison/params.h"

namespace kvpoison {
namespace {

constexpr int kMaxDomain = 6;

int IntPow(int base, int exp) {
  int out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

// Decodes input index `code` into per-key states: 0 absent, +1 or -1 held.
std::vector<int> DecodeInput(int code, int d) {
  std::vector<int> state(d);
  for (int k = 0; k < d; ++k) {
    const int digit = code % 3;
    code /= 3;
    state[k] = digit == 0 ? 0 : (digit == 1 ? 1 : -1);
  }
  return state;
}

// Distribution over the sampled (key, v*) pair after PCKV padding and
// sampling. Indexed [key - 1][0 for v* = +1, 1 for v* = -1].
std::vector<std::array<double, 2>> PckvSampleDistribution(
    const std::vector<int>& state, const Dictionary& dict) {
  std::vector<std::array<double, 2>> w(dict.padded_size(), {0.0, 0.0});
  int held = 0;
  for (int s : state) held += s != 0;
  const int padded = std::max(held, dict.padding());
  const double each = 1.0 / padded;
  for (int k = 0; k < dict.num_keys(); ++k) {
    if (state[k] == 1) w[k][0] += each;
    if (state[k] == -1) w[k][1] += each;
  }
  for (int j = 0; j < padded - held; ++j) {
    const int index = dict.num_keys() + j;
    w[index][0] += 0.5 * each;
    w[index][1] += 0.5 * each;
  }
  return w;
}

// Tracks max and min probability of every output across inputs.
class RatioTracker {
 public:
  explicit RatioTracker(size_t outputs)
      : max_(outputs, 0.0),
        min_(outputs, std::numeric_limits<double>::infinity()) {}

  void Observe(const std::vector<double>& distribution) {
    for (size_t o = 0; o < distribution.size(); ++o) {
      max_[o] = std::max(max_[o], distribution[o]);
      min_[o] = std::min(min_[o], distribution[o]);
    }
  }

  double MaxRatio() const {
    double worst = 1.0;
    for (size_t o = 0; o < max_.size(); ++o) {
      if (max_[o] == 0.0) continue;
      if (min_[o] == 0.0) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, max_[o] / min_[o]);
    }
    return worst;
  }

 private:
  std::vector<double> max_;
  std::vector<double> min_;
};

double GrrMaxRatio(const PerturbParams& params, const Dictionary& dict,
                   int num_inputs) {
  const int width = dict.padded_size();
  RatioTracker tracker(2 * width);
  std::vector<double> dist(2 * width);
  for (int code = 0; code < num_inputs; ++code) {
    const auto w = PckvSampleDistribution(DecodeInput(code, dict.num_keys()),
                                          dict);
    std::fill(dist.begin(), dist.end(), 0.0);
    for (int k = 0; k < width; ++k) {
      for (int v = 0; v < 2; ++v) {
        const double weight = w[k][v];
        if (weight == 0.0) continue;
        for (int i = 0; i < width; ++i) {
          for (int s = 0; s < 2; ++s) {
            double prob;
            if (i == k) {
              prob = s == v ? params.a * params.p : params.a * (1.0 - params.p);
            } else {
              prob = 0.5 * params.b;
            }
            dist[2 * i + s] += weight * prob;
          }
        }
      }
    }
    tracker.Observe(dist);
  }
  return tracker.MaxRatio();
}

double UeMaxRatio(const PerturbParams& params, const Dictionary& dict,
                  int num_inputs) {
  const int width = dict.padded_size();
  const int outputs = IntPow(3, width);
  RatioTracker tracker(outputs);
  std::vector<double> dist(outputs);
  // Output digit 0 -> 0, 1 -> +1, 2 -> -1.
  std::vector<std::vector<int>> decoded(outputs);
  for (int o = 0; o < outputs; ++o) decoded[o] = DecodeInput(o, width);
  for (int code = 0; code < num_inputs; ++code) {
    const auto w = PckvSampleDistribution(DecodeInput(code, dict.num_keys()),
                                          dict);
    std::fill(dist.begin(), dist.end(), 0.0);
    for (int k = 0; k < width; ++k) {
      for (int v = 0; v < 2; ++v) {
        const double weight = w[k][v];
        if (weight == 0.0) continue;
        const int v_star = v == 0 ? 1 : -1;
        for (int o = 0; o < outputs; ++o) {
          double prob = weight;
          for (int i = 0; i < width; ++i) {
            const int y = decoded[o][i];
            if (i == k) {
              prob *= y == v_star    ? params.a * params.p
                      : y == -v_star ? params.a * (1.0 - params.p)
                                     : 1.0 - params.a;
            } else {
              prob *= y == 0 ? 1.0 - params.b : 0.5 * params.b;
            }
          }
          dist[o] += prob;
        }
      }
    }
    tracker.Observe(dist);
  }
  return tracker.MaxRatio();
}

double PrivKvmMaxRatio(const PrivacyParams& privacy, const Dictionary& dict,
                       int num_inputs) {
  const int d = dict.num_keys();
  const double keep_key = KeepProbability(privacy.key_epsilon());
  const double keep_value = KeepProbability(privacy.value_epsilon());
  double worst = 1.0;
  // Outputs per key index: <0,0>, <1,1>, <1,-1>.
  std::vector<double> dist(3 * d);
  const int num_means = IntPow(3, d);
  for (int mean_code = 0; mean_code < num_means; ++mean_code) {
    const std::vector<int> virtual_means = DecodeInput(mean_code, d);
    RatioTracker tracker(3 * d);
    for (int code = 0; code < num_inputs; ++code) {
      const std::vector<int> state = DecodeInput(code, d);
      for (int k = 0; k < d; ++k) {
        const bool possessed = state[k] != 0;
        const double value = possessed ? state[k] : virtual_means[k];
        const double pos = 0.5 * (1.0 + value);  // Pr[v* = +1]
        const double v_plus = pos * keep_value + (1.0 - pos) * (1.0 - keep_value);
        const double report = possessed ? keep_key : 1.0 - keep_key;
        dist[3 * k] = (1.0 - report) / d;
        dist[3 * k + 1] = report * v_plus / d;
        dist[3 * k + 2] = report * (1.0 - v_plus) / d;
      }
      tracker.Observe(dist);
    }
    worst = std::max(worst, tracker.MaxRatio());
  }
  return worst;
}

}  // namespace

absl::StatusOr<LdpReport> VerifyLdpGuarantee(Protocol protocol, double epsilon,
                                             const Dictionary& dict,
                                             int num_rounds,
                                             double tolerance) {
  absl::StatusOr<PrivacyParams> privacy =
      PrivacyParams::Create(epsilon, num_rounds);
  if (!privacy.ok()) return privacy.status();
  if (dict.padded_size() > kMaxDomain) {
    return absl::InvalidArgumentError(absl::StrCat(
        "exhaustive check needs d' <= ", kMaxDomain, ", got ",
        dict.padded_size()));
  }
  const int num_inputs = IntPow(3, dict.num_keys());
  LdpReport report;
  report.protocol = protocol;
  report.epsilon = epsilon;
  report.bound = std::exp(epsilon);
  report.round_bound = report.bound;
  report.input_pairs = static_cast<int64_t>(num_inputs) * num_inputs;

  switch (protocol) {
    case Protocol::kPrivKvm:
      report.round_bound =
          std::exp(privacy->key_epsilon() + privacy->value_epsilon());
      report.outputs = 3 * dict.num_keys();
      report.max_ratio = PrivKvmMaxRatio(*privacy, dict, num_inputs);
      break;
    case Protocol::kPckvUe: {
      absl::StatusOr<PerturbParams> params = DerivePerturbParams(
          protocol, EstimationStage::kFrequency, *privacy, dict);
      if (!params.ok()) return params.status();
      report.outputs = IntPow(3, dict.padded_size());
      report.max_ratio = UeMaxRatio(*params, dict, num_inputs);
      break;
    }
    case Protocol::kPckvGrr: {
      absl::StatusOr<PerturbParams> params = DerivePerturbParams(
          protocol, EstimationStage::kFrequency, *privacy, dict);
      if (!params.ok()) return params.status();
      report.outputs = 2 * dict.padded_size();
      report.max_ratio = GrrMaxRatio(*params, dict, num_inputs);
      break;
    }
  }
  report.passed = report.max_ratio <= report.bound + tolerance;
  return report;
}

}  // namespace kvpoison
