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

#ifndef KVPOISON_ISOLATION_FOREST_H_
#define KVPOISON_ISOLATION_FOREST_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace kvpoison {

struct ForestConfig {
  int num_trees = 100;
  int subsample_size = 256;  // psi
  uint64_t seed = 0;
  // Trees are built on this many threads; the result does not depend on it.
  int num_threads = 1;
};

// Feature matrix in row-major order.
struct FeatureMatrix {
  int num_rows = 0;
  int num_cols = 0;
  std::vector<double> values;

  std::span<const double> row(int i) const {
    return {values.data() + static_cast<size_t>(i) * num_cols,
            static_cast<size_t>(num_cols)};
  }
};

// Average path length of an unsuccessful search in a binary search tree of n
// points: c(n) = 2 H(n - 1) - 2(n - 1)/n, with c(1) = 0 and c(2) = 1.
double AveragePathLength(int64_t n);

struct IsolationTreeNode {
  int feature = -1;  // -1 marks a leaf
  double split = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;  // training points that reached this leaf
};

// Isolation forest: every tree is grown on a subsample drawn without
// replacement by repeatedly picking a random feature that is not constant on
// the node and a split value uniform between its min and max, up to depth
// ceil(log2 psi). Tree t draws from its own stream derived from the seed.
class IsolationForest {
 public:
  static absl::StatusOr<IsolationForest> Fit(const FeatureMatrix& data,
                                             const ForestConfig& config);

  // s(x) = 2^(-E[h(x)] / c(psi)) in (0, 1). Scores near 1 mark anomalies.
  double Score(std::span<const double> row) const;
  std::vector<double> ScoreAll(const FeatureMatrix& data) const;

  int num_trees() const { return static_cast<int>(trees_.size()); }
  int subsample_size() const { return subsample_size_; }

 private:
  using Tree = std::vector<IsolationTreeNode>;

  double PathLength(const Tree& tree, std::span<const double> row) const;

  std::vector<Tree> trees_;
  int subsample_size_ = 0;
  double normalizer_ = 1.0;
};

}  // namespace kvpoison

#endif  // KVPOISON_ISOLATION_FOREST_H_
