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

#ifndef KVPOISON_CONFIG_H_
#define KVPOISON_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "kvpoison/dataset.h"
#include "kvpoison/types.h"

namespace kvpoison {

enum class DatasetSource { kSynthetic, kZipf, kCsv };

struct ExperimentConfig {
  Protocol protocol = Protocol::kPrivKvm;
  AttackKind attack = AttackKind::kM2ga;
  DefenseKind defense = DefenseKind::kNone;

  DatasetSource source = DatasetSource::kSynthetic;
  SyntheticConfig synthetic;
  ZipfConfig zipf;
  std::string csv_path;
  CsvSchema csv_schema;
  ValueScaling csv_scaling;

  double beta = 0.05;
  double epsilon = 1.0;
  // Number of targets; 0 means the default (1, or 2 with a defense).
  int r = 0;
  std::vector<int> targets;  // explicit targets override random selection
  int num_rounds = 10;       // PrivKVM N_iter
  int padding = 1;           // l
  double lambda = 0.1;
  int eta = 2;
  int t = 20;
  int recommender_case = 0;  // 0 disables ASR; 1, 2 or 3 select the case
  int trials = 100;
  uint64_t seed = 1;
  bool clip = true;
  int forest_trees = 100;
  int forest_subsample = 256;

  int EffectiveTargetCount() const;
};

// Parses "key = value" lines. '#' starts a comment; "[section]" headers are
// accepted and ignored, so keys must be unique across sections.
absl::StatusOr<ExperimentConfig> ParseConfig(absl::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfigFile(const std::string& path);

// Sets one field by name; the names are the ones accepted by ParseConfig.
absl::Status ApplyOverride(ExperimentConfig& config, absl::string_view key,
                           absl::string_view value);

// "key=value" form of ApplyOverride.
absl::Status ApplyOverrideAssignment(ExperimentConfig& config,
                                     absl::string_view assignment);

// Range and combination checks that do not need the dataset.
absl::Status ValidateConfig(const ExperimentConfig& config);

absl::string_view DatasetSourceName(DatasetSource source);

}  // namespace kvpoison

#endif  // KVPOISON_CONFIG_H_
