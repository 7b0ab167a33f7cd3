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

#include "kvpoison/isolation_forest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "absl/status/status.h"
#include "kvpoison/random.h"

namespace kvpoison {
namespace {

constexpr double kEulerGamma = 0.5772156649015329;

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& data, int max_depth, Rng& rng)
      : data_(data), max_depth_(max_depth), rng_(rng) {}

  // Grows the subtree over points[begin, end) and returns its root index.
  int Grow(std::vector<int>& points, int begin, int end, int depth,
           std::vector<IsolationTreeNode>& tree) {
    const int index = static_cast<int>(tree.size());
    tree.push_back(IsolationTreeNode{});
    tree[index].size = end - begin;
    if (depth >= max_depth_ || end - begin <= 1) return index;

    // Candidate features are those that still vary on this node.
    candidates_.clear();
    lows_.assign(data_.num_cols, 0.0);
    highs_.assign(data_.num_cols, 0.0);
    for (int f = 0; f < data_.num_cols; ++f) {
      double lo = data_.row(points[begin])[f];
      double hi = lo;
      for (int i = begin + 1; i < end; ++i) {
        const double v = data_.row(points[i])[f];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      lows_[f] = lo;
      highs_[f] = hi;
      if (hi > lo) candidates_.push_back(f);
    }
    if (candidates_.empty()) return index;

    const int feature =
        candidates_[UniformInt(rng_, 0, static_cast<int>(candidates_.size()) - 1)];
    const double split =
        lows_[feature] + UniformUnit(rng_) * (highs_[feature] - lows_[feature]);
    auto middle = std::partition(
        points.begin() + begin, points.begin() + end,
        [&](int p) { return data_.row(p)[feature] < split; });
    const int mid = static_cast<int>(middle - points.begin());

    tree[index].feature = feature;
    tree[index].split = split;
    const int left = Grow(points, begin, mid, depth + 1, tree);
    const int right = Grow(points, mid, end, depth + 1, tree);
    tree[index].left = left;
    tree[index].right = right;
    return index;
  }

 private:
  const FeatureMatrix& data_;
  int max_depth_;
  Rng& rng_;
  std::vector<int> candidates_;
  std::vector<double> lows_;
  std::vector<double> highs_;
};

}  // namespace

double AveragePathLength(int64_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n - 1);
  const double harmonic = std::log(m) + kEulerGamma;
  return 2.0 * harmonic - 2.0 * m / static_cast<double>(n);
}

absl::StatusOr<IsolationForest> IsolationForest::Fit(
    const FeatureMatrix& data, const ForestConfig& config) {
  if (data.num_rows < 2) {
    return absl::InvalidArgumentError("isolation forest needs >= 2 rows");
  }
  if (data.num_cols < 1 ||
      data.values.size() !=
          static_cast<size_t>(data.num_rows) * data.num_cols) {
    return absl::InvalidArgumentError("malformed feature matrix");
  }
  if (config.num_trees < 1 || config.subsample_size < 2) {
    return absl::InvalidArgumentError(
        "forest needs >= 1 tree and subsample size >= 2");
  }
  IsolationForest forest;
  forest.subsample_size_ = std::min(config.subsample_size, data.num_rows);
  forest.normalizer_ = AveragePathLength(forest.subsample_size_);
  const int max_depth =
      static_cast<int>(std::ceil(std::log2(forest.subsample_size_)));
  forest.trees_.resize(config.num_trees);

  auto build = [&](int t) {
    Rng rng = MakeRng(config.seed, {static_cast<uint64_t>(t)});
    std::vector<int> points(data.num_rows);
    std::iota(points.begin(), points.end(), 0);
    for (int i = 0; i < forest.subsample_size_; ++i) {
      std::swap(points[i], points[UniformInt(rng, i, data.num_rows - 1)]);
    }
    points.resize(forest.subsample_size_);
    TreeBuilder builder(data, max_depth, rng);
    builder.Grow(points, 0, forest.subsample_size_, 0, forest.trees_[t]);
  };

  const int threads = std::clamp(config.num_threads, 1, config.num_trees);
  if (threads == 1) {
    for (int t = 0; t < config.num_trees; ++t) build(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < config.num_trees; t += threads) build(t);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  return forest;
}

double IsolationForest::PathLength(const Tree& tree,
                                   std::span<const double> row) const {
  int node = 0;
  int depth = 0;
  while (tree[node].feature >= 0) {
    node = row[tree[node].feature] < tree[node].split ? tree[node].left
                                                      : tree[node].right;
    ++depth;
  }
  return depth + AveragePathLength(tree[node].size);
}

double IsolationForest::Score(std::span<const double> row) const {
  double total = 0.0;
  for (const Tree& tree : trees_) total += PathLength(tree, row);
  const double mean = total / static_cast<double>(trees_.size());
  return std::exp2(-mean / normalizer_);
}

std::vector<double> IsolationForest::ScoreAll(const FeatureMatrix& data) const {
  std::vector<double> out(data.num_rows);
  for (int i = 0; i < data.num_rows; ++i) out[i] = Score(data.row(i));
  return out;
}

}  // namespace kvpoison
