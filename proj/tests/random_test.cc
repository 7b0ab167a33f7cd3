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

#include "kvpoison/random.h"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace kvpoison {
namespace {

TEST(RandomTest, SameSeedAndStreamReplay) {
  Rng a = MakeRng(42, {kStreamGenuine, 3});
  Rng b = MakeRng(42, {kStreamGenuine, 3});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(RandomTest, StreamsAreDistinct) {
  std::set<uint64_t> firsts;
  for (uint64_t s = 0; s < 50; ++s) {
    Rng rng = MakeRng(7, {kStreamTrial, s});
    firsts.insert(rng());
  }
  firsts.insert(MakeRng(7, {kStreamFake, 0})());
  firsts.insert(MakeRng(8, {kStreamTrial, 0})());
  EXPECT_EQ(firsts.size(), 52u);
}

TEST(RandomTest, DeriveSeedDependsOnPathOrder) {
  EXPECT_NE(DeriveSeed(1, {2, 3}), DeriveSeed(1, {3, 2}));
  EXPECT_NE(DeriveSeed(1, {2}), DeriveSeed(1, {2, 0}));
}

TEST(RandomTest, UniformUnitInRangeWithCorrectMean) {
  Rng rng = MakeRng(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = UniformUnit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sd of the mean = sqrt(1/12 / n).
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(RandomTest, BernoulliFrequency) {
  Rng rng = MakeRng(11);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += Bernoulli(rng, 0.3);
  EXPECT_NEAR(hits / static_cast<double>(n), 0.3,
              4.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST(RandomTest, UniformIntCoversClosedRange) {
  Rng rng = MakeRng(5);
  std::set<int> seen;
  for (int i = 0; i < 1000; ++i) {
    const int v = UniformInt(rng, 2, 6);
    ASSERT_GE(v, 2);
    ASSERT_LE(v, 6);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 5u);
}

}  // namespace
}  // namespace kvpoison
