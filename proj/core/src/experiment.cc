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

#include "kvpoison/experiment.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "json.hpp"
#include "kvpoison/analysis.h"
#include "kvpoison/attacks.h"
#include "kvpoison/detection.h"
#include "kvpoison/params.h"
#include "kvpoison/pckv.h"
#include "kvpoison/random.h"

namespace kvpoison {
namespace {

using Json = nlohmann::ordered_json;

std::string FormatDouble(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string FormatOptional(const std::optional<double>& v) {
  return v.has_value() ? FormatDouble(*v) : std::string();
}

// Everything a trial needs that does not change between trials.
struct Shared {
  const ExperimentConfig& config;
  const Dataset& dataset;
  DatasetStats stats;
  Dictionary dict;
  PrivacyParams privacy;
  int num_fake = 0;
  int r = 0;
  AggregateOptions aggregate;
};

template <typename T>
std::vector<T> Concat(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

absl::StatusOr<EstimateTable> EstimateBatch(Protocol protocol,
                                            const MessageBatch& batch,
                                            const Shared& s) {
  absl::StatusOr<PerturbParams> params = DerivePerturbParams(
      protocol, EstimationStage::kFrequency, s.privacy, s.dict);
  if (!params.ok()) return params.status();
  if (const auto* ue = std::get_if<std::vector<UeVector>>(&batch)) {
    return PckvEstimate(CountUeSupports(*ue, s.dict), *params, s.dict,
                        s.aggregate);
  }
  if (const auto* grr = std::get_if<std::vector<GrrPair>>(&batch)) {
    return PckvEstimate(CountGrrSupports(*grr, s.dict), *params, s.dict,
                        s.aggregate);
  }
  return absl::InvalidArgumentError("expected a PCKV message batch");
}

absl::StatusOr<MessageBatch> CollectGenuine(Protocol protocol,
                                            const Dataset& dataset,
                                            const Shared& s, uint64_t seed) {
  absl::StatusOr<PerturbParams> params = DerivePerturbParams(
      protocol, EstimationStage::kFrequency, s.privacy, s.dict);
  if (!params.ok()) return params.status();
  Rng rng = MakeRng(seed, {kStreamGenuine, 1});
  if (protocol == Protocol::kPckvUe) {
    return MessageBatch(PckvUeCollect(dataset, *params, s.dict, rng));
  }
  return MessageBatch(PckvGrrCollect(dataset, *params, s.dict, rng));
}

MessageBatch ConcatBatch(const MessageBatch& genuine, const MessageBatch& fake) {
  return std::visit(
      [&](const auto& g) -> MessageBatch {
        using V = std::decay_t<decltype(g)>;
        const auto* f = std::get_if<V>(&fake);
        return f == nullptr ? MessageBatch(g) : MessageBatch(Concat(g, *f));
      },
      genuine);
}

absl::StatusOr<TargetSet> ChooseTargets(const Shared& s,
                                        const std::vector<int>& pre_attack,
                                        uint64_t seed) {
  const int d = s.dict.num_keys();
  if (!s.config.targets.empty()) {
    return TargetSet::Create(s.config.targets, d);
  }
  std::vector<int> candidates;
  for (int k = 1; k <= d; ++k) {
    if (std::find(pre_attack.begin(), pre_attack.end(), k) == pre_attack.end()) {
      candidates.push_back(k);
    }
  }
  if (s.r > static_cast<int>(candidates.size())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot choose r = ", s.r, " targets from ", candidates.size(),
        " eligible keys"));
  }
  Rng rng = MakeRng(seed, {kStreamTargets});
  const int size = static_cast<int>(candidates.size());
  for (int i = 0; i < s.r; ++i) {
    std::swap(candidates[i], candidates[UniformInt(rng, i, size - 1)]);
  }
  candidates.resize(s.r);
  return TargetSet::Create(std::move(candidates), d);
}

AnalyticalContext MakeContext(const Shared& s, const TargetSet& targets) {
  AnalyticalContext ctx;
  ctx.beta = static_cast<double>(s.num_fake) /
             static_cast<double>(s.dataset.num_users());
  ctx.epsilon = s.config.epsilon;
  ctx.num_rounds = s.config.num_rounds;
  ctx.num_keys = s.dict.num_keys();
  ctx.padding = s.dict.padding();
  for (int k : targets.keys()) {
    ctx.target_frequency.push_back(s.stats.frequency[k - 1]);
    ctx.target_mean.push_back(s.stats.mean[k - 1].value_or(0.0));
  }
  return ctx;
}

double SumOver(const std::vector<double>& values, const TargetSet& targets) {
  double total = 0.0;
  for (int k : targets.keys()) total += values[k - 1];
  return total;
}

// Trains the one-class forest, records detection rates and the gain left
// after dropping flagged users.
absl::Status DefendOneClass(const Shared& s, uint64_t seed,
                            const FeatureMatrix& features,
                            const std::vector<MessageBatch>& batches,
                            const EstimateTable& before,
                            const TargetSet& targets, int m,
                            TrialRecord& record) {
  const ExperimentConfig& c = s.config;
  const int n = static_cast<int>(s.dataset.num_users());
  Rng known_rng = MakeRng(seed, {kStreamDefense, 0});
  absl::StatusOr<std::vector<int>> known =
      SampleKnownGenuine(n, c.lambda, known_rng);
  if (!known.ok()) return known.status();
  DefenseConfig defense;
  defense.kind = c.defense;
  defense.lambda = c.lambda;
  defense.forest = ForestConfig{c.forest_trees, c.forest_subsample,
                                DeriveSeed(seed, {kStreamDefense, 1}), 1};
  absl::StatusOr<OneClassResult> oc = OneClassDetect(features, *known, defense);
  if (!oc.ok()) return oc.status();
  const DetectionRates rates = DetectionMetrics(oc->detected, n, m);
  record.fpr = rates.fpr;
  record.fnr = rates.fnr;
  absl::StatusOr<EstimateTable> defended = ReaggregateExcluding(
      c.protocol, batches, oc->detected, s.privacy, s.dict, s.aggregate);
  if (defended.ok()) {
    record.defended_gain_frequency = FrequencyGain(before, *defended, targets);
    record.defended_gain_mean = MeanGain(before, *defended, targets);
  } else if (defended.status().code() != absl::StatusCode::kFailedPrecondition) {
    return defended.status();
  }
  return absl::OkStatus();
}

absl::StatusOr<TrialRecord> RunTrial(const Shared& s, int index) {
  const ExperimentConfig& c = s.config;
  const Protocol protocol = c.protocol;
  const bool attacking = c.attack != AttackKind::kNone;
  const int n = static_cast<int>(s.dataset.num_users());
  const int m = attacking ? s.num_fake : 0;
  TrialRecord record;
  record.trial = index;
  record.seed = DeriveSeed(c.seed, {kStreamTrial, static_cast<uint64_t>(index)});
  const uint64_t seed = record.seed;

  // Baseline.
  EstimateTable before;
  MessageBatch genuine;
  if (protocol == Protocol::kPrivKvm) {
    PrivKvmRunOptions run_options{s.aggregate, false};
    absl::StatusOr<PrivKvmRunResult> run = PrivKvmRun(
        s.dataset, s.privacy, s.dict, seed, nullptr, nullptr, run_options);
    if (!run.ok()) return run.status();
    before = std::move(run->table);
  } else {
    absl::StatusOr<MessageBatch> collected =
        CollectGenuine(protocol, s.dataset, s, seed);
    if (!collected.ok()) return collected.status();
    genuine = *std::move(collected);
    absl::StatusOr<EstimateTable> table = EstimateBatch(protocol, genuine, s);
    if (!table.ok()) return table.status();
    before = *std::move(table);
  }

  std::vector<int> pre_attack;
  const bool recommend = c.recommender_case > 0;
  RecommenderConfig rec_config{static_cast<RecommenderCase>(
                                   std::max(c.recommender_case, 1)),
                               c.t};
  if (recommend) {
    Rng rng = MakeRng(seed, {kStreamRecommend, 0});
    absl::StatusOr<std::vector<int>> list = RecommendTopT(before, rec_config, rng);
    if (!list.ok()) return list.status();
    pre_attack = *std::move(list);
  }
  absl::StatusOr<TargetSet> targets = ChooseTargets(s, pre_attack, seed);
  if (!targets.ok()) return targets.status();
  record.targets = targets->keys();
  for (int k : targets->keys()) record.target_frequency += s.stats.frequency[k - 1];

  // Attack.
  AttackConfig attack_config{c.attack, *targets, m};
  EstimateTable after;
  std::vector<MessageBatch> batches;  // what the server saw, for OC
  PrivKvmAdversary adversary;
  absl::Status craft_status;
  if (protocol == Protocol::kPrivKvm) {
    if (attacking) {
      adversary = [&](int, Rng& rng) {
        absl::StatusOr<CraftResult> crafted =
            CraftAttack(protocol, attack_config, s.dict, s.privacy, rng);
        if (!crafted.ok()) {
          craft_status = crafted.status();
          return std::vector<PrivKvmMessage>();
        }
        return std::get<std::vector<PrivKvmMessage>>(crafted->messages);
      };
    }
    PrivKvmRunOptions run_options{s.aggregate,
                                  c.defense == DefenseKind::kOneClass};
    absl::StatusOr<PrivKvmRunResult> run = PrivKvmRun(
        s.dataset, s.privacy, s.dict, seed, adversary, nullptr, run_options);
    if (!run.ok()) return run.status();
    if (!craft_status.ok()) return craft_status;
    after = std::move(run->table);
    if (c.defense == DefenseKind::kOneClass) {
      batches.emplace_back(run->rounds.front());
      batches.emplace_back(run->rounds.back());
      const FeatureMatrix features = PrivKvmFeatures(run->rounds, s.dict);
      if (absl::Status st = DefendOneClass(s, seed, features, batches, before,
                                           *targets, m, record);
          !st.ok()) {
        return st;
      }
    }
  } else {
    MessageBatch combined = genuine;
    if (attacking) {
      Rng rng = MakeRng(seed, {kStreamFake, 1});
      absl::StatusOr<CraftResult> crafted =
          CraftAttack(protocol, attack_config, s.dict, s.privacy, rng);
      if (!crafted.ok()) return crafted.status();
      record.disguise_violations = crafted->disguise_violations;
      combined = ConcatBatch(genuine, crafted->messages);
    }
    absl::StatusOr<EstimateTable> table = EstimateBatch(protocol, combined, s);
    if (!table.ok()) return table.status();
    after = *std::move(table);
    if (c.defense == DefenseKind::kOneClass) {
      const FeatureMatrix features =
          protocol == Protocol::kPckvUe
              ? UeFeatures(std::get<std::vector<UeVector>>(combined), s.dict)
              : GrrFeatures(std::get<std::vector<GrrPair>>(combined));
      batches.push_back(std::move(combined));
      if (absl::Status st = DefendOneClass(s, seed, features, batches, before,
                                           *targets, m, record);
          !st.ok()) {
        return st;
      }
    }
  }

  if (c.defense == DefenseKind::kAnomalyScore) {
    absl::StatusOr<AnomalyState> state =
        AnomalyState::Create(protocol, n + m, s.dict);
    if (!state.ok()) return state.status();
    absl::Status hook_status;
    PrivKvmRoundHook hook = [&](int, std::span<const PrivKvmMessage> messages,
                                std::vector<bool>& excluded) {
      if (absl::Status st = state->Update(messages); !st.ok()) {
        hook_status = st;
        return;
      }
      absl::StatusOr<std::vector<int>> fresh =
          AnomalyDetect(*state, c.eta, excluded);
      if (!fresh.ok()) hook_status = fresh.status();
    };
    PrivKvmRunOptions run_options{s.aggregate, false};
    absl::StatusOr<PrivKvmRunResult> run = PrivKvmRun(
        s.dataset, s.privacy, s.dict, seed, adversary, hook, run_options);
    if (!hook_status.ok()) return hook_status;
    if (!craft_status.ok()) return craft_status;
    if (run.ok()) {
      record.defended_gain_frequency = FrequencyGain(before, run->table, *targets);
      record.defended_gain_mean = MeanGain(before, run->table, *targets);
      DetectionRates rates = DetectionMetrics(run->excluded, n, m);
      record.fpr = rates.fpr;
      record.fnr = rates.fnr;
    } else if (run.status().code() != absl::StatusCode::kInvalidArgument) {
      return run.status();
    }
  }

  record.gain_frequency = FrequencyGain(before, after, *targets);
  record.gain_mean = MeanGain(before, after, *targets);
  record.attacked_frequency = SumOver(after.frequency, *targets);
  record.attacked_mean = SumOver(after.mean, *targets);

  if (recommend && attacking) {
    Rng rng = MakeRng(seed, {kStreamRecommend, 1});
    absl::StatusOr<std::vector<int>> list = RecommendTopT(after, rec_config, rng);
    if (!list.ok()) return list.status();
    absl::StatusOr<double> asr = AttackSuccessRate(*targets, *list, pre_attack);
    if (!asr.ok()) return asr.status();
    record.asr = *asr;
  }

  if (attacking) {
    const AnalyticalContext ctx = MakeContext(s, *targets);
    absl::StatusOr<double> freq = AnalyticalFrequencyGain(c.attack, protocol, ctx);
    if (freq.ok()) record.analytical_frequency = *freq;
    absl::StatusOr<double> mean = AnalyticalMeanGain(c.attack, protocol, ctx);
    if (mean.ok()) record.analytical_mean = *mean;
  }
  return record;
}

std::optional<MeanWithError> SummarizeOptional(
    const std::vector<TrialRecord>& trials,
    std::optional<double> TrialRecord::*field) {
  std::vector<double> values;
  for (const TrialRecord& t : trials) {
    if ((t.*field).has_value()) values.push_back(*(t.*field));
  }
  if (values.empty()) return std::nullopt;
  return Summarize(values);
}

Json MeanErrorJson(const std::optional<MeanWithError>& v) {
  if (!v.has_value()) return nullptr;
  return Json{{"mean", v->mean}, {"se", v->standard_error}};
}

Json OptionalJson(const std::optional<double>& v) {
  if (!v.has_value()) return nullptr;
  return *v;
}

Json ConfigJson(const ExperimentConfig& c) {
  Json j;
  j["protocol"] = ProtocolName(c.protocol);
  j["attack"] = AttackName(c.attack);
  j["defense"] = DefenseName(c.defense);
  j["dataset"] = DatasetSourceName(c.source);
  switch (c.source) {
    case DatasetSource::kSynthetic:
      j["n"] = c.synthetic.num_users;
      j["d"] = c.synthetic.num_keys;
      j["key_sigma"] = c.synthetic.key_sigma;
      j["value_sigma"] = c.synthetic.value_sigma;
      j["mean_amplitude"] = c.synthetic.mean_amplitude;
      j["dataset_seed"] = c.synthetic.seed;
      break;
    case DatasetSource::kZipf:
      j["n"] = c.zipf.num_users;
      j["d"] = c.zipf.num_keys;
      j["zipf_exponent"] = c.zipf.exponent;
      j["max_pairs"] = c.zipf.max_pairs;
      j["value_sigma"] = c.zipf.value_sigma;
      j["dataset_seed"] = c.zipf.seed;
      break;
    case DatasetSource::kCsv:
      j["dataset_path"] = c.csv_path;
      j["user_column"] = c.csv_schema.user_column;
      j["key_column"] = c.csv_schema.key_column;
      j["value_column"] = c.csv_schema.value_column;
      j["value_min"] = OptionalJson(c.csv_scaling.min);
      j["value_max"] = OptionalJson(c.csv_scaling.max);
      break;
  }
  j["beta"] = c.beta;
  j["epsilon"] = c.epsilon;
  j["r"] = c.EffectiveTargetCount();
  j["targets"] = c.targets;
  j["n_iter"] = c.num_rounds;
  j["padding"] = c.padding;
  j["lambda"] = c.lambda;
  j["eta"] = c.eta;
  j["t"] = c.t;
  j["case"] = c.recommender_case;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["clip"] = c.clip;
  j["trees"] = c.forest_trees;
  j["subsample"] = c.forest_subsample;
  return j;
}

Json SummaryJson(const ExperimentSummary& s) {
  Json j;
  j["n"] = s.num_users;
  j["d"] = s.num_keys;
  j["m"] = s.num_fake;
  j["r"] = s.r;
  j["gain_freq"] = MeanErrorJson(s.gain_frequency);
  j["gain_mean"] = MeanErrorJson(s.gain_mean);
  j["defended_gain_freq"] = MeanErrorJson(s.defended_gain_frequency);
  j["defended_gain_mean"] = MeanErrorJson(s.defended_gain_mean);
  j["analytical_gain_freq"] = OptionalJson(s.analytical_frequency);
  j["analytical_gain_mean"] = OptionalJson(s.analytical_mean);
  j["analytical_gain_freq_sampled"] = OptionalJson(s.analytical_frequency_sampled);
  j["asr"] = MeanErrorJson(s.asr);
  j["fpr"] = MeanErrorJson(s.fpr);
  j["fnr"] = MeanErrorJson(s.fnr);
  j["disguise_violations"] = s.disguise_violations;
  return j;
}

const char* kSweepParameters[] = {"beta", "epsilon", "r", "n_iter",
                                  "lambda", "eta", "t"};

}  // namespace

absl::StatusOr<Dataset> BuildDataset(const ExperimentConfig& config) {
  switch (config.source) {
    case DatasetSource::kSynthetic:
      return GenerateSynthetic(config.synthetic);
    case DatasetSource::kZipf:
      return GenerateZipf(config.zipf);
    case DatasetSource::kCsv: {
      absl::StatusOr<LoadedDataset> loaded =
          LoadCsv(config.csv_path, config.csv_schema, config.csv_scaling);
      if (!loaded.ok()) return loaded.status();
      return std::move(loaded->dataset);
    }
  }
  return absl::InvalidArgumentError("unknown dataset source");
}

absl::StatusOr<EstimateTable> EstimateWithoutAttack(
    const Dataset& dataset, Protocol protocol, const PrivacyParams& privacy,
    const Dictionary& dict, uint64_t seed, AggregateOptions options) {
  if (protocol == Protocol::kPrivKvm) {
    absl::StatusOr<PrivKvmRunResult> run = PrivKvmRun(
        dataset, privacy, dict, seed, nullptr, nullptr, {options, false});
    if (!run.ok()) return run.status();
    return std::move(run->table);
  }
  absl::StatusOr<PerturbParams> params =
      DerivePerturbParams(protocol, EstimationStage::kFrequency, privacy, dict);
  if (!params.ok()) return params.status();
  Rng rng = MakeRng(seed, {kStreamGenuine, 1});
  if (protocol == Protocol::kPckvUe) {
    const std::vector<UeVector> messages =
        PckvUeCollect(dataset, *params, dict, rng);
    return PckvEstimate(CountUeSupports(messages, dict), *params, dict, options);
  }
  const std::vector<GrrPair> messages = PckvGrrCollect(dataset, *params, dict, rng);
  return PckvEstimate(CountGrrSupports(messages, dict), *params, dict, options);
}

absl::StatusOr<ExperimentReport> RunExperimentOn(const ExperimentConfig& config,
                                                 const Dataset& dataset,
                                                 RunOptions options) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  if (absl::Status s = ValidateDataset(dataset); !s.ok()) return s;
  absl::StatusOr<DatasetStats> stats = TrueStats(dataset);
  if (!stats.ok()) return stats.status();
  absl::StatusOr<Dictionary> dict =
      Dictionary::Create(dataset.num_keys, config.padding);
  if (!dict.ok()) return dict.status();
  absl::StatusOr<PrivacyParams> privacy =
      PrivacyParams::Create(config.epsilon, config.num_rounds);
  if (!privacy.ok()) return privacy.status();

  const int r = config.EffectiveTargetCount();
  if (r > dataset.num_keys) {
    return absl::InvalidArgumentError(absl::StrCat(
        "r = ", r, " exceeds the number of keys d = ", dataset.num_keys));
  }
  if (config.recommender_case > 0 && config.t > dataset.num_keys) {
    return absl::InvalidArgumentError("t exceeds the number of keys");
  }
  const int num_fake =
      static_cast<int>(std::llround(config.beta * dataset.num_users()));
  if (config.attack != AttackKind::kNone && num_fake < 1) {
    return absl::InvalidArgumentError(
        "round(beta * n) must be >= 1 when an attack is enabled");
  }

  Shared shared{config, dataset, *std::move(stats), *dict, *privacy,
                num_fake, r, AggregateOptions{config.clip}};

  std::vector<absl::StatusOr<TrialRecord>> results(
      config.trials, absl::UnknownError("trial not run"));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < config.trials; i = next.fetch_add(1)) {
      results[i] = RunTrial(shared, i);
    }
  };
  const int workers = std::clamp(options.workers, 1, config.trials);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  ExperimentReport report;
  report.config = config;
  for (auto& result : results) {
    if (!result.ok()) return result.status();
    report.trials.push_back(*std::move(result));
  }

  ExperimentSummary& sum = report.summary;
  sum.num_users = dataset.num_users();
  sum.num_keys = dataset.num_keys;
  sum.num_fake = config.attack == AttackKind::kNone ? 0 : num_fake;
  sum.r = r;
  std::vector<double> gf, gm;
  for (const TrialRecord& t : report.trials) {
    gf.push_back(t.gain_frequency);
    gm.push_back(t.gain_mean);
    sum.disguise_violations += t.disguise_violations;
  }
  sum.gain_frequency = Summarize(gf);
  sum.gain_mean = Summarize(gm);
  sum.defended_gain_frequency =
      SummarizeOptional(report.trials, &TrialRecord::defended_gain_frequency);
  sum.defended_gain_mean =
      SummarizeOptional(report.trials, &TrialRecord::defended_gain_mean);
  if (auto v = SummarizeOptional(report.trials, &TrialRecord::analytical_frequency)) {
    sum.analytical_frequency = v->mean;
  }
  if (auto v = SummarizeOptional(report.trials, &TrialRecord::analytical_mean)) {
    sum.analytical_mean = v->mean;
  }
  sum.asr = SummarizeOptional(report.trials, &TrialRecord::asr);
  sum.fpr = SummarizeOptional(report.trials, &TrialRecord::fpr);
  sum.fnr = SummarizeOptional(report.trials, &TrialRecord::fnr);

  if (config.protocol == Protocol::kPrivKvm &&
      config.attack != AttackKind::kNone) {
    std::vector<double> sampled;
    for (const TrialRecord& t : report.trials) {
      absl::StatusOr<TargetSet> targets =
          TargetSet::Create(t.targets, dataset.num_keys);
      if (!targets.ok()) continue;
      absl::StatusOr<double> v = PrivKvmSampledFrequencyGain(
          config.attack, MakeContext(shared, *targets));
      if (v.ok()) sampled.push_back(*v);
    }
    if (!sampled.empty()) sum.analytical_frequency_sampled = Summarize(sampled).mean;
  }
  return report;
}

absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               RunOptions options) {
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  absl::StatusOr<Dataset> dataset = BuildDataset(config);
  if (!dataset.ok()) return dataset.status();
  return RunExperimentOn(config, *dataset, options);
}

std::string ReportJson(const ExperimentReport& report) {
  Json j;
  j["config"] = ConfigJson(report.config);
  j["summary"] = SummaryJson(report.summary);
  return j.dump(2) + "\n";
}

std::string TrialsCsv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "trial,seed,targets,target_frequency,gain_freq,gain_mean,"
         "attacked_freq,attacked_mean,defended_gain_freq,defended_gain_mean,"
         "analytical_gain_freq,analytical_gain_mean,asr,fpr,fnr,"
         "disguise_violations\n";
  for (const TrialRecord& t : report.trials) {
    out << t.trial << ',' << t.seed << ',' << absl::StrJoin(t.targets, " ")
        << ',' << FormatDouble(t.target_frequency) << ','
        << FormatDouble(t.gain_frequency) << ',' << FormatDouble(t.gain_mean)
        << ',' << FormatDouble(t.attacked_frequency) << ','
        << FormatDouble(t.attacked_mean) << ','
        << FormatOptional(t.defended_gain_frequency) << ','
        << FormatOptional(t.defended_gain_mean) << ','
        << FormatOptional(t.analytical_frequency) << ','
        << FormatOptional(t.analytical_mean) << ',' << FormatOptional(t.asr)
        << ',' << FormatOptional(t.fpr) << ',' << FormatOptional(t.fnr) << ','
        << t.disguise_violations << '\n';
  }
  return out.str();
}

absl::StatusOr<std::vector<ExperimentReport>> Sweep(
    const ExperimentConfig& config, const std::string& parameter,
    const std::vector<std::string>& values, RunOptions options) {
  if (values.empty()) {
    return absl::InvalidArgumentError("sweep needs at least one value");
  }
  if (std::find(std::begin(kSweepParameters), std::end(kSweepParameters),
                parameter) == std::end(kSweepParameters)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "cannot sweep '", parameter, "'; choose one of ",
        absl::StrJoin(kSweepParameters, ", ")));
  }
  if (absl::Status s = ValidateConfig(config); !s.ok()) return s;
  absl::StatusOr<Dataset> dataset = BuildDataset(config);
  if (!dataset.ok()) return dataset.status();
  std::vector<ExperimentReport> reports;
  for (const std::string& value : values) {
    ExperimentConfig point = config;
    if (absl::Status s = ApplyOverride(point, parameter, value); !s.ok()) {
      return s;
    }
    absl::StatusOr<ExperimentReport> report =
        RunExperimentOn(point, *dataset, options);
    if (!report.ok()) return report.status();
    reports.push_back(*std::move(report));
  }
  return reports;
}

std::string SweepCsv(const std::string& parameter,
                     const std::vector<std::string>& values,
                     const std::vector<ExperimentReport>& reports) {
  std::ostringstream out;
  for (size_t i = 0; i < reports.size(); ++i) {
    std::istringstream rows(TrialsCsv(reports[i]));
    std::string line;
    std::getline(rows, line);
    if (i == 0) out << "parameter,value," << line << '\n';
    while (std::getline(rows, line)) {
      out << parameter << ',' << values[i] << ',' << line << '\n';
    }
  }
  return out.str();
}

std::string SweepJson(const std::string& parameter,
                      const std::vector<std::string>& values,
                      const std::vector<ExperimentReport>& reports) {
  Json points = Json::array();
  for (size_t i = 0; i < reports.size(); ++i) {
    Json p;
    p["parameter"] = parameter;
    p["value"] = values[i];
    p["config"] = ConfigJson(reports[i].config);
    p["summary"] = SummaryJson(reports[i].summary);
    points.push_back(std::move(p));
  }
  return points.dump(2) + "\n";
}

}  // namespace kvpoison
