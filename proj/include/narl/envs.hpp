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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "narl/mdp.hpp"

namespace narl {

namespace riverswim {
inline constexpr std::size_t kLeft = 0;
inline constexpr std::size_t kRight = 1;
inline constexpr double kLeftBankReward = 0.005;
}  // namespace riverswim

namespace chain {
inline constexpr std::size_t kBack = 0;
inline constexpr std::size_t kForward = 1;
inline constexpr double kDefaultSlip = 0.1;
inline constexpr double kBackReward = 0.01;
}  // namespace chain

namespace deep_sea {
// Total cost of n rightward moves; each one costs kMoveCost / n.
inline constexpr double kMoveCost = 0.01;
inline std::size_t cell(std::size_t n, std::size_t row, std::size_t col) {
  return row * n + col;
}
}  // namespace deep_sea

// Chain of n states. LEFT drifts deterministically to state 0, RIGHT pushes
// against the current. Starts in state 0.
FiniteMdp make_riverswim(std::size_t n, std::size_t horizon);

// FORWARD advances with probability 1 - slip (the far state absorbs), BACK
// resets to state 0.
FiniteMdp make_chain(std::size_t n, std::size_t horizon,
                     double slip = chain::kDefaultSlip);

// n x n grid flattened row-major, horizon n. One row is descended per step.
FiniteMdp make_deep_sea(std::size_t n, std::uint64_t action_map_seed);

// Raw action index that moves RIGHT in each cell, a pure function of the seed.
std::vector<std::size_t> deep_sea_right_actions(std::size_t n,
                                                std::uint64_t action_map_seed);

// Policy that always moves RIGHT (or always LEFT) under the given action map.
Policy deep_sea_constant_policy(std::size_t n, std::uint64_t action_map_seed,
                                bool right);

// Flat-Dirichlet rows, uniform reward means with Bernoulli realizations,
// uniform initial distribution.
FiniteMdp make_random_mdp(std::size_t num_states, std::size_t num_actions,
                          std::size_t horizon, std::uint64_t seed);

// Environment addressable by name from a config file.
struct EnvSpec {
  std::string name = "riverswim";  // riverswim | chain | deepsea | random
  std::size_t n = 6;
  std::size_t horizon = 20;
  double slip = chain::kDefaultSlip;
  std::uint64_t seed = 0;
  std::size_t num_states = 4;
  std::size_t num_actions = 2;

  std::string label() const;
};

// Deep Sea and random MDPs take their seed from `env_seed` (the harness
// passes a per-run seed derived from the run's master seed).
FiniteMdp make_env(const EnvSpec& spec, std::uint64_t env_seed);

}  // namespace narl
