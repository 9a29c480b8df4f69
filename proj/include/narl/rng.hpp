// Copyright 2026 The NARL Authors
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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace narl {

using Rng = std::mt19937_64;

// Stream tags keep the substreams of one run disjoint.
enum class Stream : std::uint64_t {
  kSimulation = 1,
  kRewardNoise = 2,
  kDynamicsNoise = 3,
  kBootstrap = 4,
  kViewMasks = 5,
  kPosterior = 6,
  kEnvironment = 7,
  kViewPrior = 8,
  kVerification = 9,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based seed derivation: the result depends only on the seed and the
// key sequence, never on how many draws other streams have made.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_stream(std::uint64_t seed, Stream tag,
                       std::initializer_list<std::uint64_t> keys = {}) {
  std::uint64_t h = derive_seed(seed, {static_cast<std::uint64_t>(tag)});
  for (std::uint64_t k : keys) h = derive_seed(h, {k});
  return Rng(h);
}

}  // namespace narl
