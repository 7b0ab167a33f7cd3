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

#ifndef KVPOISON_EXPERIMENT_H_
#define KVPOISON_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/config.h"
#include "kvpoison/dataset.h"
#include "kvpoison/metrics.h"
#include "kvpoison/privkvm.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct TrialRecord {
  int trial = 0;
  uint64_t seed = 0;
  std::vector<int> targets;
  double target_frequency = 0.0;  // true f_T
  double gain_frequency = 0.0;
  double gain_mean = 0.0;
  // Target estimates after the attack, summed over targets.
  double attacked_frequency = 0.0;
  double attacked_mean = 0.0;
  std::optional<double> defended_gain_frequency;
  std::optional<double> defended_gain_mean;
  std::optional<double> analytical_frequency;
  std::optional<double> analytical_mean;
  std::optional<double> asr;
  std::optional<double> fpr;
  std::optional<double> fnr;
  int disguise_violations = 0;
};

struct ExperimentSummary {
  int64_t num_users = 0;
  int num_keys = 0;
  int num_fake = 0;
  int r = 0;
  MeanWithError gain_frequency;
  MeanWithError gain_mean;
  std::optional<MeanWithError> defended_gain_frequency;
  std::optional<MeanWithError> defended_gain_mean;
  std::optional<double> analytical_frequency;
  std::optional<double> analytical_mean;
  // PrivKVM only: the frequency gain expected under d-rescaled counting.
  std::optional<double> analytical_frequency_sampled;
  std::optional<MeanWithError> asr;
  std::optional<MeanWithError> fpr;
  std::optional<MeanWithError> fnr;
  int disguise_violations = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  ExperimentSummary summary;
  std::vector<TrialRecord> trials;
};

struct RunOptions {
  int workers = 1;
};

// Materializes the configured dataset.
absl::StatusOr<Dataset> BuildDataset(const ExperimentConfig& config);

// Runs every trial. Trial i uses seed DeriveSeed(config.seed, {trial, i});
// inside a trial, the baseline, attacked and defended pipelines share the
// genuine users' randomness. Results do not depend on options.workers.
absl::StatusOr<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                               RunOptions options = {});
// Same, over an already built dataset.
absl::StatusOr<ExperimentReport> RunExperimentOn(const ExperimentConfig& config,
                                                 const Dataset& dataset,
                                                 RunOptions options = {});

// Estimates without any attack: one protocol execution with genuine
// randomness drawn from `seed`.
absl::StatusOr<EstimateTable> EstimateWithoutAttack(
    const Dataset& dataset, Protocol protocol, const PrivacyParams& privacy,
    const Dictionary& dict, uint64_t seed, AggregateOptions options = {});

// The JSON summary (config echo plus summary; absent metrics are null) and
// the per-trial CSV.
std::string ReportJson(const ExperimentReport& report);
std::string TrialsCsv(const ExperimentReport& report);

// Runs one experiment per value of `parameter` (beta, epsilon, r, n_iter,
// lambda, eta or t), all from the same base seed.
absl::StatusOr<std::vector<ExperimentReport>> Sweep(
    const ExperimentConfig& config, const std::string& parameter,
    const std::vector<std::string>& values, RunOptions options = {});

// Long format: one row per value per trial, prefixed by parameter,value.
std::string SweepCsv(const std::string& parameter,
                     const std::vector<std::string>& values,
                     const std::vector<ExperimentReport>& reports);
// A JSON array of the per-value summaries.
std::string SweepJson(const std::string& parameter,
                      const std::vector<std::string>& values,
                      const std::vector<ExperimentReport>& reports);

}  // namespace kvpoison

#endif  // KVPOISON_EXPERIMENT_H_
