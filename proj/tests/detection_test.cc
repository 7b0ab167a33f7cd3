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

#include "kvpoison/detection.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "kvpoison/dataset.h"
#include "kvpoison/metrics.h"
#include "kvpoison/params.h"
#include "kvpoison/pckv.h"
#include "status_matchers.h"

namespace kvpoison {
namespace {

using ::kvpoison::testing::StatusIs;
using ::testing::ElementsAre;
using ::testing::IsEmpty;

Dictionary Dict(int d, int l = 1) { return Dictionary::Create(d, l).value(); }

std::vector<PrivKvmMessage> Round(std::vector<int> keys) {
  std::vector<PrivKvmMessage> out;
  for (int k : keys) out.push_back({k, 1, 1});
  return out;
}

std::vector<double> Row(const FeatureMatrix& f, int i) {
  const std::span<const double> row = f.row(i);
  return {row.begin(), row.end()};
}

TEST(FeaturesTest, PrivKvmRowsConcatenateRounds) {
  const std::vector<std::vector<PrivKvmMessage>> rounds = {
      {{2, 1, -1}, {4, 0, 0}}, {{1, 1, 1}, {4, 1, -1}}};
  const FeatureMatrix f = PrivKvmFeatures(rounds, Dict(4));
  EXPECT_EQ(f.num_rows, 2);
  EXPECT_EQ(f.num_cols, 6);
  EXPECT_THAT(Row(f, 0), ElementsAre(0.5, 1, -1, 0.25, 1, 1));
  EXPECT_THAT(Row(f, 1), ElementsAre(1.0, 0, 0, 1.0, 1, -1));
}

TEST(FeaturesTest, UeAndGrrRows) {
  const std::vector<UeVector> ue = {{{1, 0, -1}}, {{0, 0, 1}}};
  const FeatureMatrix fu = UeFeatures(ue, Dict(2));
  EXPECT_EQ(fu.num_cols, 3);
  EXPECT_THAT(Row(fu, 0), ElementsAre(1, 0, -1));
  const std::vector<GrrPair> grr = {{3, -1}, {1, 1}};
  const FeatureMatrix fg = GrrFeatures(grr);
  EXPECT_THAT(Row(fg, 0), ElementsAre(3, -1));
  EXPECT_THAT(Row(fg, 1), ElementsAre(1, 1));
}

TEST(SampleKnownGenuineTest, SortedDistinctRounded) {
  Rng rng = MakeRng(1);
  ASSERT_OK_AND_ASSIGN(std::vector<int> known, SampleKnownGenuine(1000, 0.1, rng));
  EXPECT_EQ(known.size(), 100u);
  EXPECT_TRUE(std::is_sorted(known.begin(), known.end()));
  EXPECT_EQ(std::adjacent_find(known.begin(), known.end()), known.end());
  EXPECT_GE(known.front(), 0);
  EXPECT_LT(known.back(), 1000);
  ASSERT_OK_AND_ASSIGN(std::vector<int> one, SampleKnownGenuine(3, 0.01, rng));
  EXPECT_EQ(one.size(), 1u);
  EXPECT_THAT(SampleKnownGenuine(10, 0.0, rng),
              StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(SampleKnownGenuine(10, 1.5, rng),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

FeatureMatrix ClusterWithOutliers(int cluster, int outliers) {
  FeatureMatrix m;
  m.num_cols = 2;
  m.num_rows = cluster + outliers;
  Rng rng = MakeRng(2);
  for (int i = 0; i < cluster; ++i) {
    m.values.push_back(UniformUnit(rng));
    m.values.push_back(UniformUnit(rng));
  }
  for (int i = 0; i < outliers; ++i) {
    m.values.push_back(50.0 + 10.0 * i);
    m.values.push_back(-50.0 - 10.0 * i);
  }
  return m;
}

TEST(OneClassDetectTest, TieLabelsTheLargerGroupGenuine) {
  const FeatureMatrix data = ClusterWithOutliers(400, 5);
  DefenseConfig config;
  config.forest.seed = 3;
  const std::vector<int> probe = {0};
  ASSERT_OK_AND_ASSIGN(OneClassResult first, OneClassDetect(data, probe, config));
  ASSERT_TRUE(first.split_found);
  // One known genuine user on each side of the threshold.
  int low = -1;
  int high = -1;
  for (int u = 0; u < data.num_rows; ++u) {
    if (first.scores[u] < config.score_threshold && low < 0) low = u;
    if (first.scores[u] >= config.score_threshold && high < 0) high = u;
  }
  ASSERT_GE(low, 0);
  ASSERT_GE(high, 0);
  const std::vector<int> tied = {low, high};
  ASSERT_OK_AND_ASSIGN(OneClassResult out, OneClassDetect(data, tied, config));
  int high_size = 0;
  for (double s : out.scores) high_size += s >= config.score_threshold;
  ASSERT_LT(high_size, data.num_rows - high_size);
  for (int u = 0; u < data.num_rows; ++u) {
    EXPECT_EQ(out.detected[u], out.scores[u] >= config.score_threshold);
  }
  for (int u = 400; u < 405; ++u) EXPECT_TRUE(out.detected[u]);
}

TEST(OneClassDetectTest, IdenticalUsersGiveNoSplit) {
  FeatureMatrix data;
  data.num_rows = 50;
  data.num_cols = 2;
  data.values.assign(100, 1.0);
  const std::vector<int> known = {0, 1};
  ASSERT_OK_AND_ASSIGN(OneClassResult out,
                       OneClassDetect(data, known, DefenseConfig{}));
  EXPECT_FALSE(out.split_found);
  EXPECT_EQ(std::count(out.detected.begin(), out.detected.end(), true), 0);
  EXPECT_THAT(OneClassDetect(data, std::vector<int>{}, DefenseConfig{}),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(OneClassDetectTest, CatchesMostIdenticalGrrFakes) {
  SyntheticConfig sc;
  sc.num_users = 4000;
  sc.num_keys = 20;
  sc.key_sigma = 3.0;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(sc));
  const Dictionary dict = Dict(20);
  const PrivacyParams privacy = PrivacyParams::Create(1.0, 1).value();
  const PerturbParams params =
      DerivePerturbParams(Protocol::kPckvGrr, EstimationStage::kFrequency,
                          privacy, dict)
          .value();
  Rng rng = MakeRng(4);
  std::vector<GrrPair> batch = PckvGrrCollect(data, params, dict, rng);
  const int m = 200;
  batch.insert(batch.end(), m, GrrPair{19, 1});
  DefenseConfig config;
  config.forest.seed = 5;
  ASSERT_OK_AND_ASSIGN(std::vector<int> known, SampleKnownGenuine(4000, 0.1, rng));
  ASSERT_OK_AND_ASSIGN(OneClassResult out,
                       OneClassDetect(GrrFeatures(batch), known, config));
  const DetectionRates rates = DetectionMetrics(out.detected, 4000, m);
  EXPECT_LT(*rates.fnr, 0.5);
}

TEST(AnomalyStateTest, RepeatedAndDistinctKeys) {
  ASSERT_OK_AND_ASSIGN(AnomalyState state,
                       AnomalyState::Create(Protocol::kPrivKvm, 2, Dict(20)));
  for (int t = 1; t <= 10; ++t) {
    ASSERT_OK(state.Update(Round({7, t})));
    EXPECT_EQ(state.score(0), t);
    EXPECT_EQ(state.score(1), 1);
  }
  EXPECT_EQ(state.rounds_seen(), 10);
}

TEST(AnomalyStateTest, ScoresStayWithinRoundCountAndNeverDecrease) {
  const int users = 500;
  ASSERT_OK_AND_ASSIGN(AnomalyState state,
                       AnomalyState::Create(Protocol::kPrivKvm, users, Dict(8)));
  Rng rng = MakeRng(6);
  std::vector<int> previous(users, 0);
  for (int t = 1; t <= 12; ++t) {
    std::vector<int> keys(users);
    for (int& k : keys) k = UniformInt(rng, 1, 8);
    ASSERT_OK(state.Update(Round(keys)));
    for (int u = 0; u < users; ++u) {
      EXPECT_GE(state.score(u), std::max(1, previous[u]));
      EXPECT_LE(state.score(u), t);
      previous[u] = state.score(u);
    }
  }
}

TEST(AnomalyStateTest, RejectsOtherProtocolsAndBadInput) {
  EXPECT_THAT(AnomalyState::Create(Protocol::kPckvUe, 3, Dict(5)),
              StatusIs(absl::StatusCode::kInvalidArgument));
  ASSERT_OK_AND_ASSIGN(AnomalyState state,
                       AnomalyState::Create(Protocol::kPrivKvm, 2, Dict(5)));
  EXPECT_THAT(state.Update(Round({1})), StatusIs(absl::StatusCode::kInvalidArgument));
  EXPECT_THAT(state.Update(Round({1, 6})),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(AnomalyDetectTest, M2gaSingleTargetFlaggedInRoundTwo) {
  const int genuine = 50;
  const int fake = 10;
  ASSERT_OK_AND_ASSIGN(
      AnomalyState state,
      AnomalyState::Create(Protocol::kPrivKvm, genuine + fake, Dict(320)));
  std::vector<bool> flagged;
  for (int t = 1; t <= 10; ++t) {
    std::vector<int> keys;
    // Genuine users never repeat here.
    for (int u = 0; u < genuine; ++u) keys.push_back(1 + (u * 10 + t) % 320);
    for (int u = 0; u < fake; ++u) keys.push_back(9);
    ASSERT_OK(state.Update(Round(keys)));
    ASSERT_OK_AND_ASSIGN(std::vector<int> fresh, AnomalyDetect(state, 2, flagged));
    if (t == 2) {
      ASSERT_EQ(fresh.size(), static_cast<size_t>(fake));
      EXPECT_EQ(fresh.front(), genuine);
    } else {
      EXPECT_THAT(fresh, IsEmpty());
    }
  }
  const DetectionRates rates = DetectionMetrics(flagged, genuine, fake);
  EXPECT_EQ(*rates.fnr, 0.0);
  EXPECT_EQ(*rates.fpr, 0.0);
}

TEST(AnomalyDetectTest, ThresholdAboveRoundCountFlagsNobody) {
  ASSERT_OK_AND_ASSIGN(AnomalyState state,
                       AnomalyState::Create(Protocol::kPrivKvm, 3, Dict(4)));
  std::vector<bool> flagged;
  for (int t = 0; t < 5; ++t) {
    ASSERT_OK(state.Update(Round({1, 2, 3})));
    ASSERT_OK_AND_ASSIGN(std::vector<int> fresh, AnomalyDetect(state, 6, flagged));
    EXPECT_THAT(fresh, IsEmpty());
  }
  EXPECT_THAT(AnomalyDetect(state, 0, flagged),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

TEST(AnomalyDetectTest, UniformGenuineFlagRateMatchesBirthdayBound) {
  const int users = 20000;
  const int d = 320;
  ASSERT_OK_AND_ASSIGN(AnomalyState state,
                       AnomalyState::Create(Protocol::kPrivKvm, users, Dict(d)));
  Rng rng = MakeRng(7);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> keys(users);
    for (int& k : keys) k = UniformInt(rng, 1, d);
    ASSERT_OK(state.Update(Round(keys)));
  }
  std::vector<bool> flagged;
  ASSERT_OK(AnomalyDetect(state, 2, flagged).status());
  double distinct = 1.0;
  for (int i = 1; i < 10; ++i) distinct *= 1.0 - static_cast<double>(i) / d;
  const double expected = 1.0 - distinct;
  EXPECT_NEAR(expected, 0.132, 0.001);
  const double rate =
      std::count(flagged.begin(), flagged.end(), true) / static_cast<double>(users);
  EXPECT_NEAR(rate, expected, 4.0 * std::sqrt(expected * (1 - expected) / users));
}

TEST(ReaggregateTest, NoExclusionMatchesPlainAggregation) {
  const Dictionary dict = Dict(5, 2);
  const PrivacyParams privacy = PrivacyParams::Create(1.0, 1).value();
  const PerturbParams params =
      DerivePerturbParams(Protocol::kPckvUe, EstimationStage::kFrequency,
                          privacy, dict)
          .value();
  SyntheticConfig sc;
  sc.num_users = 2000;
  sc.num_keys = 5;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(sc));
  Rng rng = MakeRng(8);
  const std::vector<UeVector> batch = PckvUeCollect(data, params, dict, rng);
  const std::vector<MessageBatch> rounds = {batch};
  ASSERT_OK_AND_ASSIGN(
      EstimateTable defended,
      ReaggregateExcluding(Protocol::kPckvUe, rounds, {}, privacy, dict));
  ASSERT_OK_AND_ASSIGN(EstimateTable plain,
                       PckvEstimate(CountUeSupports(batch, dict), params, dict));
  EXPECT_EQ(defended.frequency, plain.frequency);
  EXPECT_EQ(defended.mean, plain.mean);
}

TEST(ReaggregateTest, ExcludingExactFakesRestoresGenuineEstimate) {
  const Dictionary dict = Dict(6);
  const PrivacyParams privacy = PrivacyParams::Create(1.0, 1).value();
  const PerturbParams params =
      DerivePerturbParams(Protocol::kPckvGrr, EstimationStage::kFrequency,
                          privacy, dict)
          .value();
  SyntheticConfig sc;
  sc.num_users = 3000;
  sc.num_keys = 6;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateSynthetic(sc));
  Rng rng = MakeRng(9);
  const std::vector<GrrPair> genuine = PckvGrrCollect(data, params, dict, rng);
  std::vector<GrrPair> attacked = genuine;
  attacked.insert(attacked.end(), 150, GrrPair{2, 1});
  std::vector<bool> excluded(attacked.size(), false);
  for (size_t u = 3000; u < excluded.size(); ++u) excluded[u] = true;
  const std::vector<MessageBatch> rounds = {attacked};
  ASSERT_OK_AND_ASSIGN(
      EstimateTable defended,
      ReaggregateExcluding(Protocol::kPckvGrr, rounds, excluded, privacy, dict));
  ASSERT_OK_AND_ASSIGN(EstimateTable clean,
                       PckvEstimate(CountGrrSupports(genuine, dict), params, dict));
  EXPECT_EQ(defended.frequency, clean.frequency);
  EXPECT_EQ(defended.mean, clean.mean);
  for (int k = 0; k < 6; ++k) {
    EXPECT_GE(defended.frequency[k], 0.0);
    EXPECT_LE(defended.frequency[k], 1.0);
    EXPECT_GE(defended.mean[k], -1.0);
    EXPECT_LE(defended.mean[k], 1.0);
  }
}

TEST(ReaggregateTest, EverybodyExcludedIsAnError) {
  const std::vector<MessageBatch> rounds = {std::vector<GrrPair>{{1, 1}, {2, -1}}};
  EXPECT_THAT(ReaggregateExcluding(Protocol::kPckvGrr, rounds, {true, true},
                                   PrivacyParams::Create(1.0, 1).value(), Dict(3)),
              StatusIs(absl::StatusCode::kFailedPrecondition));
  EXPECT_THAT(ReaggregateExcluding(Protocol::kPrivKvm, rounds, {},
                                   PrivacyParams::Create(1.0, 1).value(), Dict(3)),
              StatusIs(absl::StatusCode::kInvalidArgument));
}

}  // namespace
}  // namespace kvpoison
