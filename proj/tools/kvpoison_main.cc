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

// Command-line runner: run, sweep and verify-ldp.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "kvpoison/config.h"
#include "kvpoison/experiment.h"
#include "kvpoison/ldp_check.h"
#include "kvpoison/types.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfigError = 2;

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kOutOfRange:
      return kExitConfigError;
    default:
      return kExitFailure;
  }
}

int Fail(const absl::Status& status) {
  std::cerr << "kvpoison: " << status << "\n";
  return ExitCodeFor(status);
}

int WorkersFromEnv() {
  const char* raw = std::getenv("KVPOISON_WORKERS");
  int workers = 1;
  if (raw != nullptr && absl::SimpleAtoi(raw, &workers) && workers >= 1) {
    return workers;
  }
  return 1;
}

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string json_path;
  std::string csv_path;
};

void AddCommonFlags(CLI::App* app, CommonFlags& flags) {
  app->add_option("--config", flags.config_path, "Config file (key = value)");
  app->add_option("--override", flags.overrides, "key=value override")
      ->take_all();
  app->add_option("--json", flags.json_path, "JSON summary path (default stdout)");
  app->add_option("--csv", flags.csv_path, "Per-trial CSV path");
  app->allow_extras();
}

// Unrecognized "--key value" and "--key=value" arguments become overrides.
absl::Status ApplyExtras(kvpoison::ExperimentConfig& config,
                         const std::vector<std::string>& extras) {
  for (size_t i = 0; i < extras.size(); ++i) {
    absl::string_view arg = extras[i];
    if (!absl::ConsumePrefix(&arg, "--")) {
      return absl::InvalidArgumentError("unexpected argument: " + extras[i]);
    }
    const size_t eq = arg.find('=');
    if (eq != absl::string_view::npos) {
      if (absl::Status s = kvpoison::ApplyOverride(config, arg.substr(0, eq),
                                                   arg.substr(eq + 1));
          !s.ok()) {
        return s;
      }
      continue;
    }
    if (i + 1 >= extras.size()) {
      return absl::InvalidArgumentError("missing value for --" +
                                        std::string(arg));
    }
    if (absl::Status s = kvpoison::ApplyOverride(config, arg, extras[++i]);
        !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<kvpoison::ExperimentConfig> LoadConfig(
    const CommonFlags& flags, const std::vector<std::string>& extras) {
  kvpoison::ExperimentConfig config;
  if (!flags.config_path.empty()) {
    absl::StatusOr<kvpoison::ExperimentConfig> loaded =
        kvpoison::LoadConfigFile(flags.config_path);
    if (!loaded.ok()) return loaded.status();
    config = *std::move(loaded);
  }
  for (const std::string& assignment : flags.overrides) {
    if (absl::Status s = kvpoison::ApplyOverrideAssignment(config, assignment);
        !s.ok()) {
      return s;
    }
  }
  if (absl::Status s = ApplyExtras(config, extras); !s.ok()) return s;
  if (absl::Status s = kvpoison::ValidateConfig(config); !s.ok()) return s;
  return config;
}

absl::Status WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return absl::OkStatus();
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) return absl::InternalError("cannot write " + path);
  return absl::OkStatus();
}

int Run(const CommonFlags& flags, const std::vector<std::string>& extras) {
  absl::StatusOr<kvpoison::ExperimentConfig> config = LoadConfig(flags, extras);
  if (!config.ok()) return Fail(config.status());
  absl::StatusOr<kvpoison::ExperimentReport> report =
      kvpoison::RunExperiment(*config, {WorkersFromEnv()});
  if (!report.ok()) return Fail(report.status());
  if (absl::Status s = WriteText(flags.json_path, kvpoison::ReportJson(*report));
      !s.ok()) {
    return Fail(s);
  }
  if (!flags.csv_path.empty()) {
    if (absl::Status s = WriteText(flags.csv_path, kvpoison::TrialsCsv(*report));
        !s.ok()) {
      return Fail(s);
    }
  }
  return 0;
}

int RunSweep(const CommonFlags& flags, const std::vector<std::string>& extras,
             const std::string& parameter, const std::string& raw_values) {
  absl::StatusOr<kvpoison::ExperimentConfig> config = LoadConfig(flags, extras);
  if (!config.ok()) return Fail(config.status());
  const std::vector<std::string> values =
      absl::StrSplit(raw_values, absl::ByAnyChar(", "), absl::SkipEmpty());
  absl::StatusOr<std::vector<kvpoison::ExperimentReport>> reports =
      kvpoison::Sweep(*config, parameter, values, {WorkersFromEnv()});
  if (!reports.ok()) return Fail(reports.status());
  if (absl::Status s = WriteText(flags.json_path,
                                 kvpoison::SweepJson(parameter, values, *reports));
      !s.ok()) {
    return Fail(s);
  }
  if (!flags.csv_path.empty()) {
    if (absl::Status s = WriteText(
            flags.csv_path, kvpoison::SweepCsv(parameter, values, *reports));
        !s.ok()) {
      return Fail(s);
    }
  }
  return 0;
}

int RunVerifyLdp(const std::string& protocol_name, double epsilon, int d,
                 int padding, int rounds) {
  absl::StatusOr<kvpoison::Protocol> protocol =
      kvpoison::ParseProtocol(protocol_name);
  if (!protocol.ok()) return Fail(protocol.status());
  absl::StatusOr<kvpoison::Dictionary> dict =
      kvpoison::Dictionary::Create(d, padding);
  if (!dict.ok()) return Fail(dict.status());
  absl::StatusOr<kvpoison::LdpReport> report =
      kvpoison::VerifyLdpGuarantee(*protocol, epsilon, *dict, rounds);
  if (!report.ok()) return Fail(report.status());
  std::cout << kvpoison::ProtocolName(report->protocol)
            << " epsilon=" << report->epsilon << " max_ratio=" << report->max_ratio
            << " bound=" << report->bound << " pairs=" << report->input_pairs
            << " outputs=" << report->outputs << " "
            << (report->passed ? "PASS" : "FAIL") << "\n";
  return report->passed ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisoning attacks and defenses for LDP key-value collection"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "Run one multi-trial experiment");
  AddCommonFlags(run, run_flags);

  CommonFlags sweep_flags;
  std::string parameter;
  std::string values;
  CLI::App* sweep = app.add_subcommand("sweep", "Run one experiment per value");
  AddCommonFlags(sweep, sweep_flags);
  sweep->add_option("--param", parameter,
                    "beta, epsilon, r, n_iter, lambda, eta or t")
      ->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();

  std::string protocol;
  double epsilon = 1.0;
  int d = 3;
  int padding = 1;
  int rounds = 1;
  CLI::App* verify =
      app.add_subcommand("verify-ldp", "Exhaustively check the LDP bound");
  verify->add_option("--protocol", protocol, "privkvm, pckv-ue or pckv-grr")
      ->required();
  verify->add_option("--epsilon", epsilon, "Privacy budget")->required();
  verify->add_option("--d", d, "Number of keys");
  verify->add_option("--padding", padding, "Padding length l");
  verify->add_option("--rounds", rounds, "PrivKVM rounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  if (run->parsed()) return Run(run_flags, run->remaining());
  if (sweep->parsed()) {
    return RunSweep(sweep_flags, sweep->remaining(), parameter, values);
  }
  return RunVerifyLdp(protocol, epsilon, d, padding, rounds);
}
