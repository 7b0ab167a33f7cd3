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

#ifndef KVPOISON_RANDOM_H_
#define KVPOISON_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace kvpoison {

// All randomness in the library flows through this engine. Every consumer
// takes it by reference so a caller can seed and replay any experiment.
using Rng = std::mt19937_64;

// Stream ids used to derive independent sub-streams of a trial seed.
enum StreamId : uint64_t {
  kStreamGenuine = 1,
  kStreamFake = 2,
  kStreamTargets = 3,
  kStreamRecommend = 4,
  kStreamDefense = 5,
  kStreamDataset = 6,
  kStreamTrial = 7,
};

// SplitMix64 finalizer.
uint64_t MixSeed(uint64_t x);

// Derives an independent stream from a base seed and a path of stream ids,
// e.g. MakeRng(trial_seed, {kGenuineStream, round}).
Rng MakeRng(uint64_t seed, std::initializer_list<uint64_t> stream = {});
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> stream);

// Uniform double in [0, 1) built from the top 53 bits of one draw, so every
// call consumes exactly one engine output.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(Rng& rng, double probability) {
  return UniformUnit(rng) < probability;
}

// Uniform integer in [lo, hi].
inline int UniformInt(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace kvpoison

#endif  // KVPOISON_RANDOM_H_
