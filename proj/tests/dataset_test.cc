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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "status_matchers.h"

namespace kvpoison {
namespace {

using ::kvpoison::testing::StatusIs;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("kvpoison_dataset_test_" +
             std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string Write(const std::string& name, const std::string& contents) const {
    const std::string file = (path_ / name).string();
    std::ofstream(file) << contents;
    return file;
  }
  std::string Path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

TEST(SyntheticTest, OnePairPerUserAndFrequenciesSumToOne) {
  SyntheticConfig config;
  config.num_users = 5000;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(config));
  EXPECT_EQ(data.num_users(), 5000);
  EXPECT_EQ(data.num_keys, 100);
  ASSERT_OK(ValidateDataset(data));
  for (const UserRecordSet& u : data.users) ASSERT_EQ(u.records.size(), 1u);
  ASSERT_OK_AND_ASSIGN(DatasetStats stats, TrueStats(data));
  double total = 0.0;
  for (double f : stats.frequency) total += f;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(stats.num_records, 5000);
  EXPECT_EQ(stats.pairs_p90, 1.0);
}

TEST(SyntheticTest, ZeroKeySpreadPutsEveryoneOnTheCentre) {
  SyntheticConfig config;
  config.num_users = 200;
  config.num_keys = 9;
  config.key_sigma = 0.0;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(config));
  ASSERT_OK_AND_ASSIGN(DatasetStats stats, TrueStats(data));
  EXPECT_EQ(stats.frequency[4], 1.0);
}

TEST(SyntheticTest, DeterministicPerSeed) {
  SyntheticConfig config;
  config.num_users = 1000;
  ASSERT_OK_AND_ASSIGN(Dataset a, GenerateSynthetic(config));
  ASSERT_OK_AND_ASSIGN(Dataset b, GenerateSynthetic(config));
  config.seed = 2;
  ASSERT_OK_AND_ASSIGN(Dataset c, GenerateSynthetic(config));
  bool same_as_c = true;
  for (size_t u = 0; u < a.users.size(); ++u) {
    EXPECT_EQ(a.users[u].records, b.users[u].records);
    same_as_c = same_as_c && a.users[u].records == c.users[u].records;
  }
  EXPECT_FALSE(same_as_c);
}

TEST(SyntheticTest, MeanAmplitudeTiltsKeyMeans) {
  SyntheticConfig config;
  config.num_users = 20000;
  config.num_keys = 5;
  config.key_sigma = 3.0;
  config.value_sigma = 0.1;
  config.mean_amplitude = 0.5;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(config));
  ASSERT_OK_AND_ASSIGN(DatasetStats stats, TrueStats(data));
  EXPECT_NEAR(*stats.mean[0], -0.5, 0.02);
  EXPECT_NEAR(*stats.mean[2], 0.0, 0.02);
  EXPECT_NEAR(*stats.mean[4], 0.5, 0.02);
}

TEST(SyntheticTest, RejectsBadConfig) {
  SyntheticConfig config;
  config.num_users = 0;
  EXPECT_THAT(GenerateSynthetic(config), StatusIs(absl::StatusCode::kInvalidArgument));
  config.num_users = 10;
  config.key_sigma = -1.0;
  EXPECT_THAT(GenerateSynthetic(config), StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(ZipfTest, ValidAndSkewed) {
  ZipfConfig config;
  config.num_users = 5000;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateZipf(config));
  ASSERT_OK(ValidateDataset(data));
  ASSERT_OK_AND_ASSIGN(DatasetStats stats, TrueStats(data));
  EXPECT_GT(stats.frequency[0], stats.frequency[9]);
  EXPECT_GT(stats.frequency[9], stats.frequency[199]);
  for (const UserRecordSet& u : data.users) {
    EXPECT_GE(u.records.size(), 1u);
    EXPECT_LE(u.records.size(), 5u);
  }
  config.max_pairs = 201;
  EXPECT_THAT(GenerateZipf(config), StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(TrueStatsTest, HandExample) {
  Dataset data;
  data.num_keys = 3;
  data.users = {{0, {{1, 0.5}}}, {1, {{1, -0.5}, {2, 1.0}}}};
  ASSERT_OK_AND_ASSIGN(DatasetStats stats, TrueStats(data));
  EXPECT_THAT(stats.frequency, ElementsAre(1.0, 0.5, 0.0));
  EXPECT_EQ(*stats.mean[0], 0.0);
  EXPECT_EQ(*stats.mean[1], 1.0);
  EXPECT_FALSE(stats.mean[2].has_value());
  EXPECT_EQ(stats.num_records, 3);
  EXPECT_NEAR(stats.pairs_p90, 1.9, 1e-12);
  EXPECT_THAT(TrueStats(Dataset{}), StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(LoadCsvTest, RatingsScaleLinearly) {
  TempDir dir;
  const std::string path = dir.Write(
      "ratings.csv", "user,key,value\nu1,a,5\nu1,b,3\nu2,a,1\nu2,c,4\n");
  ASSERT_OK_AND_ASSIGN(LoadedDataset loaded, LoadCsv(path, CsvSchema{}));
  EXPECT_EQ(loaded.dataset.num_keys, 3);
  EXPECT_EQ(loaded.dataset.num_users(), 2);
  EXPECT_THAT(loaded.key_names, ElementsAre("a", "b", "c"));
  EXPECT_THAT(loaded.dataset.users[0].records,
              ElementsAre(KvRecord{1, 1.0}, KvRecord{2, 0.0}));
  EXPECT_THAT(loaded.dataset.users[1].records,
              ElementsAre(KvRecord{1, -1.0}, KvRecord{3, 0.5}));
  ASSERT_OK_AND_ASSIGN(DatasetStats stats, TrueStats(loaded.dataset));
  EXPECT_EQ(stats.frequency.size(), 3u);
}

TEST(LoadCsvTest, ExplicitRangeSchemaAndDuplicates) {
  TempDir dir;
  const std::string path = dir.Write(
      "apps.csv", "device,count,category\nd1,10,games\nd1,20,games\nd2,0,tools\n");
  CsvSchema schema{"device", "category", "count"};
  ValueScaling scaling{0.0, 40.0};
  ASSERT_OK_AND_ASSIGN(LoadedDataset loaded, LoadCsv(path, schema, scaling));
  ASSERT_EQ(loaded.dataset.users[0].records.size(), 1u);
  EXPECT_EQ(loaded.dataset.users[0].records[0], (KvRecord{1, 0.0}));
  EXPECT_EQ(loaded.dataset.users[1].records[0], (KvRecord{2, -1.0}));
  EXPECT_EQ(loaded.value_min, 0.0);
  EXPECT_EQ(loaded.value_max, 40.0);
}

TEST(LoadCsvTest, Errors) {
  TempDir dir;
  EXPECT_THAT(LoadCsv(dir.Path("missing.csv"), CsvSchema{}),
              StatusIs(absl::StatusCode::kNotFound));
  EXPECT_THAT(LoadCsv(dir.Write("empty.csv", ""), CsvSchema{}),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(LoadCsv(dir.Write("bad.csv", "user,key,value\nu,k,high\n"), CsvSchema{}),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("non-numeric")));
  EXPECT_THAT(LoadCsv(dir.Write("flat.csv", "user,key,value\nu,k,2\nv,k,2\n"),
                      CsvSchema{}),
              StatusIs(absl::StatusCode::kInvalidArgument, HasSubstr("degenerate")));
  EXPECT_THAT(LoadCsv(dir.Write("cols.csv", "a,b\n1,2\n"), CsvSchema{}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(LoadCsvTest, ScalingPreservesOrder) {
  TempDir dir;
  std::string csv = "user,key,value\n";
  for (int i = 0; i < 20; ++i) {
    csv += "u" + std::to_string(i) + ",k," + std::to_string(i * i - 7) + "\n";
  }
  ASSERT_OK_AND_ASSIGN(LoadedDataset loaded,
                       LoadCsv(dir.Write("order.csv", csv), CsvSchema{}));
  EXPECT_EQ(loaded.dataset.users.front().records[0].value, -1.0);
  EXPECT_EQ(loaded.dataset.users.back().records[0].value, 1.0);
  for (int i = 1; i < 20; ++i) {
    EXPECT_LT(loaded.dataset.users[i - 1].records[0].value,
              loaded.dataset.users[i].records[0].value);
  }
}

TEST(SaveDatasetTest, RoundTripKeepsStats) {
  TempDir dir;
  ZipfConfig config;
  config.num_users = 300;
  config.num_keys = 15;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateZipf(config));
  LoadedDataset original;
  original.dataset = data;
  for (int k = 1; k <= 15; ++k) original.key_names.push_back("key" + std::to_string(k));
  const std::string path = dir.Path("saved.csv");
  ASSERT_OK(SaveDataset(path, original));
  EXPECT_TRUE(std::filesystem::exists(path + ".json"));
  ASSERT_OK_AND_ASSIGN(LoadedDataset loaded, LoadSavedDataset(path));
  EXPECT_EQ(loaded.key_names, original.key_names);
  ASSERT_OK_AND_ASSIGN(DatasetStats a, TrueStats(data));
  ASSERT_OK_AND_ASSIGN(DatasetStats b, TrueStats(loaded.dataset));
  EXPECT_EQ(a.num_users, b.num_users);
  EXPECT_EQ(a.num_keys, b.num_keys);
  EXPECT_EQ(a.num_records, b.num_records);
  EXPECT_EQ(a.frequency, b.frequency);
  ASSERT_EQ(a.mean.size(), b.mean.size());
  for (size_t k = 0; k < a.mean.size(); ++k) {
    ASSERT_EQ(a.mean[k].has_value(), b.mean[k].has_value());
    if (a.mean[k]) {
      EXPECT_DOUBLE_EQ(*a.mean[k], *b.mean[k]);
    }
  }
}

}  // namespace
}  // namespace kvpoison
