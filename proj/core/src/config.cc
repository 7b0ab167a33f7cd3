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

#include "kvpoison/config.h"

#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace kvpoison {
namespace {

absl::Status BadValue(absl::string_view key, absl::string_view value) {
  return absl::InvalidArgumentError(
      absl::StrCat("invalid value for ", key, ": '", value, "'"));
}

absl::Status SetInt(absl::string_view key, absl::string_view value, int& out) {
  if (!absl::SimpleAtoi(value, &out)) return BadValue(key, value);
  return absl::OkStatus();
}

absl::Status SetInt64(absl::string_view key, absl::string_view value,
                      int64_t& out) {
  if (!absl::SimpleAtoi(value, &out)) return BadValue(key, value);
  return absl::OkStatus();
}

absl::Status SetDouble(absl::string_view key, absl::string_view value,
                       double& out) {
  if (!absl::SimpleAtod(value, &out)) return BadValue(key, value);
  return absl::OkStatus();
}

absl::Status SetBool(absl::string_view key, absl::string_view value, bool& out) {
  if (!absl::SimpleAtob(value, &out)) return BadValue(key, value);
  return absl::OkStatus();
}

absl::string_view Unquote(absl::string_view v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') &&
      v.back() == v.front()) {
    v.remove_prefix(1);
    v.remove_suffix(1);
  }
  return v;
}

}  // namespace

int ExperimentConfig::EffectiveTargetCount() const {
  if (!targets.empty()) return static_cast<int>(targets.size());
  if (r > 0) return r;
  return defense == DefenseKind::kNone ? 1 : 2;
}

absl::string_view DatasetSourceName(DatasetSource source) {
  switch (source) {
    case DatasetSource::kSynthetic:
      return "synthetic";
    case DatasetSource::kZipf:
      return "zipf";
    case DatasetSource::kCsv:
      return "csv";
  }
  return "unknown";
}

absl::Status ApplyOverride(ExperimentConfig& c, absl::string_view raw_key,
                           absl::string_view raw_value) {
  const std::string key = absl::AsciiStrToLower(absl::StripAsciiWhitespace(raw_key));
  const absl::string_view value = Unquote(absl::StripAsciiWhitespace(raw_value));

  if (key == "protocol") {
    absl::StatusOr<Protocol> p = ParseProtocol(value);
    if (!p.ok()) return p.status();
    c.protocol = *p;
    return absl::OkStatus();
  }
  if (key == "attack") {
    absl::StatusOr<AttackKind> a = ParseAttack(value);
    if (!a.ok()) return a.status();
    c.attack = *a;
    return absl::OkStatus();
  }
  if (key == "defense") {
    absl::StatusOr<DefenseKind> d = ParseDefense(value);
    if (!d.ok()) return d.status();
    c.defense = *d;
    return absl::OkStatus();
  }
  if (key == "dataset") {
    const std::string v = absl::AsciiStrToLower(value);
    if (v == "synthetic") {
      c.source = DatasetSource::kSynthetic;
    } else if (v == "zipf") {
      c.source = DatasetSource::kZipf;
    } else if (v == "csv") {
      c.source = DatasetSource::kCsv;
    } else {
      return BadValue(key, value);
    }
    return absl::OkStatus();
  }
  if (key == "dataset_path") {
    c.csv_path = std::string(value);
    return absl::OkStatus();
  }
  if (key == "user_column") {
    c.csv_schema.user_column = std::string(value);
    return absl::OkStatus();
  }
  if (key == "key_column") {
    c.csv_schema.key_column = std::string(value);
    return absl::OkStatus();
  }
  if (key == "value_column") {
    c.csv_schema.value_column = std::string(value);
    return absl::OkStatus();
  }
  if (key == "value_min" || key == "value_max") {
    double v;
    if (absl::Status s = SetDouble(key, value, v); !s.ok()) return s;
    (key == "value_min" ? c.csv_scaling.min : c.csv_scaling.max) = v;
    return absl::OkStatus();
  }
  if (key == "n" || key == "num_users") {
    int64_t n;
    if (absl::Status s = SetInt64(key, value, n); !s.ok()) return s;
    c.synthetic.num_users = n;
    c.zipf.num_users = n;
    return absl::OkStatus();
  }
  if (key == "d" || key == "num_keys") {
    int d;
    if (absl::Status s = SetInt(key, value, d); !s.ok()) return s;
    c.synthetic.num_keys = d;
    c.zipf.num_keys = d;
    return absl::OkStatus();
  }
  if (key == "key_sigma") return SetDouble(key, value, c.synthetic.key_sigma);
  if (key == "value_sigma") {
    if (absl::Status s = SetDouble(key, value, c.synthetic.value_sigma); !s.ok()) {
      return s;
    }
    c.zipf.value_sigma = c.synthetic.value_sigma;
    return absl::OkStatus();
  }
  if (key == "mean_amplitude") {
    return SetDouble(key, value, c.synthetic.mean_amplitude);
  }
  if (key == "zipf_exponent") return SetDouble(key, value, c.zipf.exponent);
  if (key == "max_pairs") return SetInt(key, value, c.zipf.max_pairs);
  if (key == "beta") return SetDouble(key, value, c.beta);
  if (key == "epsilon") return SetDouble(key, value, c.epsilon);
  if (key == "r") return SetInt(key, value, c.r);
  if (key == "targets") {
    c.targets.clear();
    for (absl::string_view part :
         absl::StrSplit(value, absl::ByAnyChar(", "), absl::SkipEmpty())) {
      int k;
      if (!absl::SimpleAtoi(part, &k)) return BadValue(key, value);
      c.targets.push_back(k);
    }
    return absl::OkStatus();
  }
  if (key == "n_iter" || key == "num_rounds") {
    return SetInt(key, value, c.num_rounds);
  }
  if (key == "padding" || key == "l") return SetInt(key, value, c.padding);
  if (key == "lambda") return SetDouble(key, value, c.lambda);
  if (key == "eta") return SetInt(key, value, c.eta);
  if (key == "t") return SetInt(key, value, c.t);
  if (key == "case" || key == "recommender_case") {
    return SetInt(key, value, c.recommender_case);
  }
  if (key == "trials") return SetInt(key, value, c.trials);
  if (key == "seed") {
    if (!absl::SimpleAtoi(value, &c.seed)) return BadValue(key, value);
    c.synthetic.seed = c.seed;
    c.zipf.seed = c.seed;
    return absl::OkStatus();
  }
  if (key == "dataset_seed") {
    uint64_t s;
    if (!absl::SimpleAtoi(value, &s)) return BadValue(key, value);
    c.synthetic.seed = s;
    c.zipf.seed = s;
    return absl::OkStatus();
  }
  if (key == "clip" || key == "clipping") return SetBool(key, value, c.clip);
  if (key == "trees") return SetInt(key, value, c.forest_trees);
  if (key == "subsample") return SetInt(key, value, c.forest_subsample);
  return absl::InvalidArgumentError(absl::StrCat("unknown config key: ", key));
}

absl::Status ApplyOverrideAssignment(ExperimentConfig& config,
                                     absl::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == absl::string_view::npos) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected key=value, got '", assignment, "'"));
  }
  return ApplyOverride(config, assignment.substr(0, eq),
                       assignment.substr(eq + 1));
}

absl::StatusOr<ExperimentConfig> ParseConfig(absl::string_view text) {
  ExperimentConfig config;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != absl::string_view::npos) line = line.substr(0, hash);
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": malformed section header"));
      }
      continue;
    }
    absl::Status s = ApplyOverrideAssignment(config, line);
    if (!s.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": ", s.message()));
    }
  }
  return config;
}

absl::StatusOr<ExperimentConfig> LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str());
}

absl::Status ValidateConfig(const ExperimentConfig& c) {
  if (!(c.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(c.beta >= 0.0)) return absl::InvalidArgumentError("beta must be >= 0");
  if (c.r < 0) return absl::InvalidArgumentError("r must be >= 0");
  if (c.num_rounds < 1) return absl::InvalidArgumentError("n_iter must be >= 1");
  if (c.padding < 1) return absl::InvalidArgumentError("padding must be >= 1");
  if (c.trials < 1) return absl::InvalidArgumentError("trials must be >= 1");
  if (c.t < 1) return absl::InvalidArgumentError("t must be >= 1");
  if (c.recommender_case < 0 || c.recommender_case > 3) {
    return absl::InvalidArgumentError("case must be 0 (off), 1, 2 or 3");
  }
  if (c.defense == DefenseKind::kAnomalyScore &&
      c.protocol != Protocol::kPrivKvm) {
    return absl::InvalidArgumentError(
        "the AS defense only applies to PrivKVM");
  }
  if (c.defense == DefenseKind::kOneClass &&
      !(c.lambda > 0.0 && c.lambda <= 1.0)) {
    return absl::InvalidArgumentError("lambda must lie in (0, 1]");
  }
  if (c.defense == DefenseKind::kAnomalyScore && c.eta < 1) {
    return absl::InvalidArgumentError("eta must be >= 1");
  }
  if (c.forest_trees < 1 || c.forest_subsample < 2) {
    return absl::InvalidArgumentError("invalid isolation forest settings");
  }
  if (c.source == DatasetSource::kCsv && c.csv_path.empty()) {
    return absl::InvalidArgumentError("dataset = csv needs dataset_path");
  }
  return absl::OkStatus();
}

}  // namespace kvpoison
