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

#include "kvpoison/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/strip.h"
#include "csv.h"
#include "kvpoison/random.h"
#include "json.hpp"

namespace kvpoison {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double KeyCentre(int key, int num_keys, double amplitude) {
  if (num_keys == 1 || amplitude == 0.0) return 0.0;
  return amplitude * (2.0 * (key - 1) / (num_keys - 1) - 1.0);
}

int FindColumn(const std::vector<std::string>& header, const std::string& name) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (absl::StripAsciiWhitespace(header[i]) == name) return static_cast<int>(i);
  }
  return -1;
}

void SortRecords(Dataset& dataset) {
  for (UserRecordSet& user : dataset.users) {
    std::sort(user.records.begin(), user.records.end(),
              [](const KvRecord& a, const KvRecord& b) { return a.key < b.key; });
  }
}

}  // namespace

absl::StatusOr<Dataset> GenerateSynthetic(const SyntheticConfig& config) {
  if (config.num_users < 1 || config.num_keys < 1) {
    return absl::InvalidArgumentError("synthetic data needs n >= 1 and d >= 1");
  }
  if (config.key_sigma < 0.0 || config.value_sigma < 0.0) {
    return absl::InvalidArgumentError("standard deviations must be >= 0");
  }
  Rng rng = MakeRng(config.seed, {kStreamDataset});
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int centre = (config.num_keys + 1) / 2;
  Dataset dataset;
  dataset.num_keys = config.num_keys;
  dataset.users.resize(config.num_users);
  for (int64_t u = 0; u < config.num_users; ++u) {
    const double kdraw = config.key_sigma * gauss(rng);
    const int key = std::clamp(static_cast<int>(std::lround(kdraw)) + centre, 1,
                               config.num_keys);
    const double v =
        KeyCentre(key, config.num_keys, config.mean_amplitude) +
        config.value_sigma * gauss(rng);
    dataset.users[u].user_id = u;
    dataset.users[u].records.push_back(KvRecord{key, std::clamp(v, -1.0, 1.0)});
  }
  return dataset;
}

absl::StatusOr<Dataset> GenerateZipf(const ZipfConfig& config) {
  if (config.num_users < 1 || config.num_keys < 1) {
    return absl::InvalidArgumentError("zipf data needs n >= 1 and d >= 1");
  }
  if (config.max_pairs < 1 || config.max_pairs > config.num_keys) {
    return absl::InvalidArgumentError("max_pairs must lie in 1..d");
  }
  Rng rng = MakeRng(config.seed, {kStreamDataset});
  std::vector<double> weights(config.num_keys);
  for (int k = 0; k < config.num_keys; ++k) {
    weights[k] = std::pow(static_cast<double>(k + 1), -config.exponent);
  }
  std::discrete_distribution<int> popularity(weights.begin(), weights.end());
  std::vector<double> centres(config.num_keys);
  for (double& c : centres) c = UniformUnit(rng) - 0.5;
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset dataset;
  dataset.num_keys = config.num_keys;
  dataset.users.resize(config.num_users);
  for (int64_t u = 0; u < config.num_users; ++u) {
    UserRecordSet& user = dataset.users[u];
    user.user_id = u;
    const int count = UniformInt(rng, 1, config.max_pairs);
    while (static_cast<int>(user.records.size()) < count) {
      const int key = popularity(rng) + 1;
      const bool seen = std::any_of(
          user.records.begin(), user.records.end(),
          [key](const KvRecord& r) { return r.key == key; });
      if (seen) continue;
      const double v = centres[key - 1] + config.value_sigma * gauss(rng);
      user.records.push_back(KvRecord{key, std::clamp(v, -1.0, 1.0)});
    }
  }
  SortRecords(dataset);
  return dataset;
}

absl::StatusOr<LoadedDataset> LoadCsv(const std::string& path,
                                      const CsvSchema& schema,
                                      const ValueScaling& scaling) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError(absl::StrCat(path, " is empty"));
  }
  absl::StatusOr<std::vector<std::string>> header = internal::SplitCsvLine(line);
  if (!header.ok()) return header.status();
  const int user_col = FindColumn(*header, schema.user_column);
  const int key_col = FindColumn(*header, schema.key_column);
  const int value_col = FindColumn(*header, schema.value_column);
  if (user_col < 0 || key_col < 0 || value_col < 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        path, ": header lacks one of the columns ", schema.user_column, ", ",
        schema.key_column, ", ", schema.value_column));
  }
  const int needed = std::max({user_col, key_col, value_col});

  std::unordered_map<std::string, int> user_ids;
  std::unordered_map<std::string, int> key_ids;
  LoadedDataset out;
  // Raw values per user, keyed by key id so later rows overwrite.
  std::vector<std::map<int, double>> raw;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    absl::StatusOr<std::vector<std::string>> fields =
        internal::SplitCsvLine(line);
    if (!fields.ok()) return fields.status();
    if (static_cast<int>(fields->size()) <= needed) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": too few fields"));
    }
    double value;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace((*fields)[value_col]),
                          &value) ||
        !std::isfinite(value)) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_no, ": non-numeric value '", (*fields)[value_col], "'"));
    }
    const std::string user(absl::StripAsciiWhitespace((*fields)[user_col]));
    const std::string key(absl::StripAsciiWhitespace((*fields)[key_col]));
    auto [uit, new_user] =
        user_ids.try_emplace(user, static_cast<int>(user_ids.size()));
    if (new_user) raw.emplace_back();
    auto [kit, new_key] =
        key_ids.try_emplace(key, static_cast<int>(key_ids.size()) + 1);
    if (new_key) out.key_names.push_back(key);
    raw[uit->second][kit->second] = value;
  }
  if (raw.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(path, " has no data rows"));
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& user : raw) {
    for (const auto& [key, v] : user) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  out.value_min = scaling.min.value_or(lo);
  out.value_max = scaling.max.value_or(hi);
  if (!(out.value_max > out.value_min)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "value range is degenerate: min = ", out.value_min,
        ", max = ", out.value_max));
  }
  const double span = out.value_max - out.value_min;
  out.dataset.num_keys = static_cast<int>(out.key_names.size());
  out.dataset.users.resize(raw.size());
  for (size_t u = 0; u < raw.size(); ++u) {
    UserRecordSet& user = out.dataset.users[u];
    user.user_id = static_cast<int64_t>(u);
    for (const auto& [key, v] : raw[u]) {
      const double scaled = 2.0 * (v - out.value_min) / span - 1.0;
      user.records.push_back(KvRecord{key, std::clamp(scaled, -1.0, 1.0)});
    }
  }
  return out;
}

absl::Status SaveDataset(const std::string& path, const LoadedDataset& data) {
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << "user,key,value\n";
  std::vector<const UserRecordSet*> users;
  for (const UserRecordSet& u : data.dataset.users) users.push_back(&u);
  std::stable_sort(users.begin(), users.end(),
                   [](const UserRecordSet* a, const UserRecordSet* b) {
                     return a->user_id < b->user_id;
                   });
  for (const UserRecordSet* user : users) {
    std::vector<KvRecord> records = user->records;
    std::sort(records.begin(), records.end(),
              [](const KvRecord& a, const KvRecord& b) { return a.key < b.key; });
    for (const KvRecord& r : records) {
      out << user->user_id << ',' << r.key << ',' << FormatDouble(r.value) << '\n';
    }
  }
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));

  nlohmann::json sidecar;
  sidecar["n"] = data.dataset.num_users();
  sidecar["d"] = data.dataset.num_keys;
  sidecar["value_min"] = data.value_min;
  sidecar["value_max"] = data.value_max;
  nlohmann::json keys = nlohmann::json::array();
  for (int k = 1; k <= data.dataset.num_keys; ++k) {
    keys.push_back(k <= static_cast<int>(data.key_names.size())
                       ? data.key_names[k - 1]
                       : std::to_string(k));
  }
  sidecar["key_map"] = keys;
  std::ofstream side(path + ".json");
  if (!side) {
    return absl::PermissionDeniedError(absl::StrCat("cannot write ", path, ".json"));
  }
  side << sidecar.dump(2) << '\n';
  return absl::OkStatus();
}

absl::StatusOr<LoadedDataset> LoadSavedDataset(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) return absl::NotFoundError(absl::StrCat("cannot open ", path, ".json"));
  nlohmann::json sidecar;
  try {
    side >> sidecar;
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad sidecar: ", e.what()));
  }
  LoadedDataset out;
  int64_t n = 0;
  try {
    n = sidecar.at("n").get<int64_t>();
    out.dataset.num_keys = sidecar.at("d").get<int>();
    out.value_min = sidecar.at("value_min").get<double>();
    out.value_max = sidecar.at("value_max").get<double>();
    out.key_names = sidecar.at("key_map").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad sidecar: ", e.what()));
  }
  if (n < 0 || out.dataset.num_keys < 1) {
    return absl::InvalidArgumentError("sidecar has invalid n or d");
  }

  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::string line;
  std::getline(in, line);  // header
  out.dataset.users.resize(n);
  for (int64_t u = 0; u < n; ++u) out.dataset.users[u].user_id = u;
  int64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    absl::StatusOr<std::vector<std::string>> fields =
        internal::SplitCsvLine(line);
    if (!fields.ok()) return fields.status();
    int64_t user;
    int key;
    double value;
    if (fields->size() < 3 || !absl::SimpleAtoi((*fields)[0], &user) ||
        !absl::SimpleAtoi((*fields)[1], &key) ||
        !absl::SimpleAtod((*fields)[2], &value)) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": malformed row"));
    }
    if (user < 0 || user >= n) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ":", line_no, ": user id outside 0..n-1"));
    }
    out.dataset.users[user].records.push_back(KvRecord{key, value});
  }
  SortRecords(out.dataset);
  if (absl::Status s = ValidateDataset(out.dataset); !s.ok()) return s;
  return out;
}

absl::StatusOr<DatasetStats> TrueStats(const Dataset& dataset) {
  if (dataset.users.empty()) {
    return absl::InvalidArgumentError("dataset has no users");
  }
  if (dataset.num_keys < 1) {
    return absl::InvalidArgumentError("dataset has no keys");
  }
  DatasetStats stats;
  stats.num_users = dataset.num_users();
  stats.num_keys = dataset.num_keys;
  std::vector<int64_t> holders(dataset.num_keys, 0);
  std::vector<double> sums(dataset.num_keys, 0.0);
  std::vector<int> counts;
  counts.reserve(dataset.users.size());
  for (const UserRecordSet& user : dataset.users) {
    counts.push_back(static_cast<int>(user.records.size()));
    stats.num_records += static_cast<int64_t>(user.records.size());
    for (const KvRecord& r : user.records) {
      if (r.key < 1 || r.key > dataset.num_keys) {
        return absl::InvalidArgumentError(
            absl::StrCat("key ", r.key, " outside 1..", dataset.num_keys));
      }
      ++holders[r.key - 1];
      sums[r.key - 1] += r.value;
    }
  }
  const double n = static_cast<double>(stats.num_users);
  stats.frequency.resize(dataset.num_keys);
  stats.mean.resize(dataset.num_keys);
  for (int k = 0; k < dataset.num_keys; ++k) {
    stats.frequency[k] = holders[k] / n;
    if (holders[k] > 0) stats.mean[k] = sums[k] / holders[k];
  }
  std::sort(counts.begin(), counts.end());
  const double pos = 0.9 * (counts.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, counts.size() - 1);
  stats.pairs_p90 = counts[lo] + (pos - lo) * (counts[hi] - counts[lo]);
  return stats;
}

}  // namespace kvpoison
