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

#include "kvpoison/analysis.h"

#include <cmath>
#include <limits>
#include <numeric>

#include "absl/status/status.h"
#include "kvpoison/params.h"

namespace kvpoison {
namespace {

absl::Status CheckContext(const AnalyticalContext& ctx) {
  if (!(ctx.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (ctx.num_keys < 1 || ctx.padding < 1 || ctx.num_rounds < 1) {
    return absl::InvalidArgumentError("d, l and N_iter must be >= 1");
  }
  if (ctx.r() < 1) {
    return absl::InvalidArgumentError("at least one target is required");
  }
  if (ctx.target_mean.size() != ctx.target_frequency.size()) {
    return absl::InvalidArgumentError(
        "target frequency and mean vectors differ in length");
  }
  if (ctx.beta < 0.0) {
    return absl::InvalidArgumentError("beta must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<PerturbParams> ContextParams(Protocol protocol,
                                            EstimationStage stage,
                                            const AnalyticalContext& ctx) {
  absl::StatusOr<PrivacyParams> privacy =
      PrivacyParams::Create(ctx.epsilon, ctx.num_rounds);
  if (!privacy.ok()) return privacy.status();
  absl::StatusOr<Dictionary> dict =
      Dictionary::Create(ctx.num_keys, ctx.padding);
  if (!dict.ok()) return dict.status();
  return DerivePerturbParams(protocol, stage, *privacy, *dict);
}

}  // namespace

double AnalyticalContext::total_target_frequency() const {
  return std::accumulate(target_frequency.begin(), target_frequency.end(), 0.0);
}

absl::StatusOr<double> AnalyticalFrequencyGain(AttackKind attack,
                                               Protocol protocol,
                                               const AnalyticalContext& ctx) {
  if (absl::Status s = CheckContext(ctx); !s.ok()) return s;
  const double scale = ctx.beta / (1.0 + ctx.beta);
  const double f_t = ctx.total_target_frequency();
  const double r = ctx.r();
  const double d = ctx.num_keys;
  const double l = ctx.padding;
  const double d_prime = ctx.padded_size();
  const double e1 = std::exp(ctx.epsilon / 2.0);
  const double big_e = std::exp(ctx.epsilon);
  switch (protocol) {
    case Protocol::kPrivKvm:
      switch (attack) {
        case AttackKind::kM2ga:
          return scale * (1.0 - f_t + (2.0 - r) / (e1 - 1.0));
        case AttackKind::kRma:
          return scale *
                 ((e1 - 2.0 * d + 1.0) * r / (2.0 * (e1 - 1.0) * d) - f_t);
        case AttackKind::kRkva:
          return scale * (1.0 - f_t + (1.0 - r) / (e1 - 1.0));
        case AttackKind::kNone:
          return 0.0;
      }
      break;
    case Protocol::kPckvUe:
      switch (attack) {
        case AttackKind::kM2ga:
          return scale * l * (2.0 * r - f_t + 4.0 * r / (big_e - 1.0));
        case AttackKind::kRma:
          return scale * l * (4.0 * big_e * r / (3.0 * (big_e - 1.0)) - f_t);
        case AttackKind::kRkva:
          return scale * l * (1.0 - f_t);
        case AttackKind::kNone:
          return 0.0;
      }
      break;
    case Protocol::kPckvGrr:
      switch (attack) {
        case AttackKind::kM2ga:
          return scale *
                 ((1.0 - f_t) * l + 2.0 * (d_prime - r) / (big_e - 1.0));
        case AttackKind::kRma:
          return scale * (r - f_t * d_prime) * l / d_prime;
        case AttackKind::kRkva:
          return scale * l * (1.0 - f_t);
        case AttackKind::kNone:
          return 0.0;
      }
      break;
  }
  return absl::InvalidArgumentError("unknown protocol or attack");
}

absl::StatusOr<double> AnalyticalMeanGain(AttackKind attack, Protocol protocol,
                                          const AnalyticalContext& ctx) {
  if (absl::Status s = CheckContext(ctx); !s.ok()) return s;
  if (attack == AttackKind::kNone) return 0.0;
  const double beta = ctx.beta;
  const double r = ctx.r();
  const double d = ctx.num_keys;
  const double l = ctx.padding;
  const double d_prime = ctx.padded_size();
  const double e1 = std::exp(ctx.epsilon / 2.0);
  const double e2 = std::exp(ctx.epsilon / (2.0 * ctx.num_rounds));
  const double big_e = std::exp(ctx.epsilon);

  double gain = 0.0;
  for (int i = 0; i < ctx.r(); ++i) {
    const double f = ctx.target_frequency[i];
    const double m = ctx.target_mean[i];
    double num = 0.0;
    double den = 0.0;
    switch (protocol) {
      case Protocol::kPrivKvm:
        if (attack == AttackKind::kM2ga) {
          num = f * m * r + beta * (e2 + 1.0) / (e2 - 1.0);
          den = f * r + beta;
        } else if (attack == AttackKind::kRma) {
          num = 2.0 * f * m * d;
          den = 2.0 * f * d + beta;
        } else {
          num = f * m * r * (e1 + 1.0) + e1 * beta;
          den = f * r * (e1 + 1.0) + e1 * beta;
        }
        break;
      case Protocol::kPckvUe:
        if (attack == AttackKind::kM2ga) {
          num = 2.0 * beta * l * (big_e + 1.0) + (big_e - 1.0) * f * m;
          den = 2.0 * beta * l * (big_e + 1.0) + (big_e - 1.0) * f;
        } else if (attack == AttackKind::kRma) {
          num = 3.0 * (big_e - 1.0) * f * m;
          den = 3.0 * (big_e - 1.0) * f + 4.0 * big_e * beta * l;
        } else {
          num = f * m * r + beta * l;
          den = f * r + beta * l;
        }
        break;
      case Protocol::kPckvGrr:
        if (attack == AttackKind::kM2ga) {
          num = (big_e - 1.0) * (beta * l + f * m * r) + 2.0 * beta * d_prime;
          den = beta * ((big_e - 1.0) * l + 2.0 * (d_prime - r)) +
                (big_e - 1.0) * f * r;
        } else if (attack == AttackKind::kRma) {
          num = f * m * d_prime;
          den = f * d_prime + beta * l;
        } else {
          num = f * m * r + beta * l;
          den = f * r + beta * l;
        }
        break;
    }
    if (den == 0.0) {
      return absl::InvalidArgumentError(
          "mean gain undefined: zero target frequency with beta = 0");
    }
    gain += num / den - m;
  }
  return gain;
}

absl::StatusOr<FakeSupports> ExpectedFakeSupports(
    AttackKind attack, Protocol protocol, const AnalyticalContext& ctx) {
  if (absl::Status s = CheckContext(ctx); !s.ok()) return s;
  const double r = ctx.r();
  FakeSupports out;
  if (attack == AttackKind::kNone) return out;
  if (protocol == Protocol::kPrivKvm) {
    const double e1 = std::exp(ctx.epsilon / 2.0);
    const double e2 = std::exp(ctx.epsilon / (2.0 * ctx.num_rounds));
    switch (attack) {
      case AttackKind::kM2ga:
        out.positive = 1.0 / r;
        break;
      case AttackKind::kRma:
        out.positive = out.negative = 1.0 / (4.0 * ctx.num_keys);
        break;
      default: {
        const double reported = e1 / (r * (e1 + 1.0));
        out.positive = reported * e2 / (1.0 + e2);
        out.negative = reported / (1.0 + e2);
        break;
      }
    }
    return out;
  }
  absl::StatusOr<PerturbParams> params =
      ContextParams(protocol, EstimationStage::kFrequency, ctx);
  if (!params.ok()) return params.status();
  const double a = params->a;
  const double b = params->b;
  const double p = params->p;
  switch (attack) {
    case AttackKind::kM2ga:
      out.positive = protocol == Protocol::kPckvUe ? 1.0 : 1.0 / r;
      break;
    case AttackKind::kRma:
      if (protocol == Protocol::kPckvUe) {
        out.positive = out.negative = 1.0 / 3.0;
      } else {
        out.positive = out.negative = 1.0 / (2.0 * ctx.padded_size());
      }
      break;
    default:
      out.positive = (a * p + (r - 1.0) * b / 2.0) / r;
      out.negative = (a * (1.0 - p) + (r - 1.0) * b / 2.0) / r;
      break;
  }
  return out;
}

double FrequencyGainFromSupports(const PerturbParams& params,
                                 const AnalyticalContext& ctx,
                                 const FakeSupports& supports) {
  const double a = params.a;
  const double b = params.b;
  const double l = params.padding;
  const double r = ctx.r();
  const double scale = ctx.beta / (1.0 + ctx.beta);
  const double injected =
      l * scale * r * (supports.positive + supports.negative) / (a - b);
  const double c = scale * l * (ctx.total_target_frequency() + r * b / (a - b));
  return injected - c;
}

double MeanGainFromSupports(const PerturbParams& params,
                            const AnalyticalContext& ctx,
                            const FakeSupports& supports) {
  const double a = params.a;
  const double b = params.b;
  const double p = params.p;
  const double l = params.padding;
  const double beta = ctx.beta;
  const double lead = (a - b) / (a * (2.0 * p - 1.0));
  double gain = 0.0;
  for (int i = 0; i < ctx.r(); ++i) {
    const double f = ctx.target_frequency[i];
    const double m = ctx.target_mean[i];
    const double num =
        f * a * (2.0 * p - 1.0) * m / l + beta * (supports.positive - supports.negative);
    const double den =
        f * (a - b) / l + beta * (supports.positive + supports.negative - b);
    gain += lead * num / den - m;
  }
  return gain;
}

absl::StatusOr<double> PrivKvmSampledFrequencyGain(
    AttackKind attack, const AnalyticalContext& ctx) {
  absl::StatusOr<FakeSupports> supports =
      ExpectedFakeSupports(attack, Protocol::kPrivKvm, ctx);
  if (!supports.ok()) return supports.status();
  absl::StatusOr<PerturbParams> params =
      ContextParams(Protocol::kPrivKvm, EstimationStage::kFrequency, ctx);
  if (!params.ok()) return params.status();
  const double a = params->a;
  const double b = params->b;
  const double r = ctx.r();
  const double scale = ctx.beta / (1.0 + ctx.beta);
  return scale * (ctx.num_keys * r * (supports->positive + supports->negative) /
                      (a - b) -
                  ctx.total_target_frequency() - r * b / (a - b));
}

AllocationResult OptimalityOracle(int64_t n1, int64_t n_minus1, int m,
                                  const PerturbParams& params, int64_t n) {
  const double x = static_cast<double>(n1 + n_minus1) -
                   static_cast<double>(n + m) * params.b;
  const double y = static_cast<double>(n1 - n_minus1);
  const double z =
      (params.a - params.b) / (params.a * (2.0 * params.p - 1.0));
  AllocationResult best;
  double best_value = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (int pos = m; pos >= 0; --pos) {
    for (int neg = 0; pos + neg <= m; ++neg) {
      const double den = x + pos + neg;
      if (!(den > 0.0)) continue;
      ++best.evaluated;
      const double value = z * (y + pos - neg) / den;
      if (!found || value > best_value) {
        found = true;
        best_value = value;
        best.positive = pos;
        best.negative = neg;
      }
    }
  }
  if (found) {
    best.mean = best_value;
    // Numerators of the partial derivatives; the squared denominator and z
    // are positive.
    best.positive_slope = (x - y + 2.0 * best.negative) > 0.0;
    best.negative_slope = -(x + y + 2.0 * best.positive) < 0.0;
  }
  return best;
}

GainComparison CompareGain(double empirical, double standard_error,
                           double analytical, bool approximate) {
  GainComparison out;
  out.empirical = empirical;
  out.standard_error = standard_error;
  out.analytical = analytical;
  out.approximate = approximate;
  out.absolute_deviation = std::abs(empirical - analytical);
  out.relative_deviation =
      analytical == 0.0 ? std::numeric_limits<double>::infinity()
                        : out.absolute_deviation / std::abs(analytical);
  out.z = standard_error > 0.0 ? out.absolute_deviation / standard_error
                               : (out.absolute_deviation == 0.0
                                      ? 0.0
                                      : std::numeric_limits<double>::infinity());
  return out;
}

}  // namespace kvpoison
