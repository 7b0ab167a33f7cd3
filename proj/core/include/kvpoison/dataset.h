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

#ifndef KVPOISON_DATASET_H_
#define KVPOISON_DATASET_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "kvpoison/types.h"

namespace kvpoison {

struct SyntheticConfig {
  int64_t num_users = 100000;
  int num_keys = 100;
  double key_sigma = 15.0;
  double value_sigma = 1.0;
  // Optional key-dependent value centres: key k draws its values around
  // mean_amplitude * (2(k - 1)/(d - 1) - 1), a line from -A to A.
  double mean_amplitude = 0.0;
  uint64_t seed = 1;
};

// One pair per user. The key is a zero-mean Gaussian draw rounded to the
// nearest integer, shifted by (d + 1)/2 and clamped into 1..d; the value is
// Gaussian around the key's centre, clamped into [-1, 1].
absl::StatusOr<Dataset> GenerateSynthetic(const SyntheticConfig& config);

struct ZipfConfig {
  int64_t num_users = 10000;
  int num_keys = 200;
  double exponent = 1.0;
  int max_pairs = 5;  // pairs per user are uniform in 1..max_pairs
  double value_sigma = 0.5;
  uint64_t seed = 1;
};

// Popularity follows Pr[key k] ∝ k^-exponent. Every user holds a uniform
// number of distinct keys; each key gets a random centre in [-0.5, 0.5]
// around which its values are drawn.
absl::StatusOr<Dataset> GenerateZipf(const ZipfConfig& config);

struct CsvSchema {
  std::string user_column = "user";
  std::string key_column = "key";
  std::string value_column = "value";
};

// Explicit value range, or nullopt for the observed min and max.
struct ValueScaling {
  std::optional<double> min;
  std::optional<double> max;
};

struct LoadedDataset {
  Dataset dataset;
  // key_names[k - 1] is the original name of key k.
  std::vector<std::string> key_names;
  double value_min = -1.0;
  double value_max = 1.0;
};

// Reads a headed CSV. Keys get ids 1..d in first-seen order; user ids are the
// first-seen order of users too. A repeated (user, key) row replaces the
// earlier value. Values map to 2(v - min)/(max - min) - 1.
absl::StatusOr<LoadedDataset> LoadCsv(const std::string& path,
                                      const CsvSchema& schema,
                                      const ValueScaling& scaling = {});

// Writes `path` (user,key,value rows sorted by user then key, values already
// scaled) and `path + ".json"` holding {n, d, value_min, value_max, key_map}.
absl::Status SaveDataset(const std::string& path, const LoadedDataset& data);
absl::StatusOr<LoadedDataset> LoadSavedDataset(const std::string& path);

struct DatasetStats {
  int64_t num_users = 0;
  int num_keys = 0;
  int64_t num_records = 0;
  // 90th percentile of per-user pair counts, linear interpolation.
  double pairs_p90 = 0.0;
  std::vector<double> frequency;
  // Absent for keys nobody holds.
  std::vector<std::optional<double>> mean;
};

absl::StatusOr<DatasetStats> TrueStats(const Dataset& dataset);

}  // namespace kvpoison

#endif  // KVPOISON_DATASET_H_
