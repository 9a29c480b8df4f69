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
#include <span>
#include <vector>

#include "narl/mdp.hpp"
#include "narl/noise.hpp"
#include "narl/stats.hpp"

namespace narl {

// Optimistic values, the greedy policy, and the stage-0 reward/dynamics the
// backup selected for every (s, a). chosen_dynamics may be a signed measure.
struct PlanResult {
  ValueTable values;
  Policy policy;
  std::vector<double> chosen_reward;    // |S||A|
  std::vector<double> chosen_dynamics;  // |S||A| x |S|

  // <initial_dist, V~^0>
  double start_value(std::span<const double> initial_dist) const;
};

// Reward samples r~^(m)(s, a) laid out as |S||A| x M.
struct RewardSampleTable {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t num_samples = 0;
  std::vector<double> values;

  RewardSampleTable() = default;
  RewardSampleTable(std::size_t S, std::size_t A, std::size_t M)
      : num_states(S), num_actions(A), num_samples(M), values(S * A * M, 0.0) {}
  double& at(std::size_t s, std::size_t a, std::size_t m) {
    return values[(s * num_actions + a) * num_samples + m];
  }
  double at(std::size_t s, std::size_t a, std::size_t m) const {
    return values[(s * num_actions + a) * num_samples + m];
  }
};

// Exact backward induction on an estimated model (r_hat, p_hat).
PlanResult plan_on_model(const EmpiricalModel& model, std::size_t horizon);

// Noise augmented extended value iteration:
//   V~^h[s] = max_a clip(r_hat + max_m xi^m) + <p_hat, V~^{h+1}>
//                   + max_m <xi^m, V~^{h+1}>
// The reward maximum and the dynamics maximum are taken independently.
PlanResult naevi(const EmpiricalModel& model, const NoiseEnsemble& ensemble,
                 std::size_t horizon);

// Noise augmented value iteration:
//   Q~_h(s,a) = min(Q~_{k-1,h}(s,a), H, max_m r~^m(s,a) + <p_hat, V~_{h+1}>)
// Sampled rewards are not clipped. A null prev_q is treated as +infinity.
PlanResult navi(const RewardSampleTable& reward_samples,
                const EmpiricalModel& model, std::size_t horizon,
                const ValueTable* prev_q);

// argmax of <p, v> over { p in simplex : ||p - p_hat||_1 <= radius }.
std::vector<double> optimistic_transition(std::span<const double> p_hat,
                                          double radius,
                                          std::span<const double> v);

// UCRL2 extended value iteration with per-pair radii (|S||A| tables).
PlanResult evi_ucrl2(const EmpiricalModel& model,
                     std::span<const double> beta_r_table,
                     std::span<const double> beta_p_table,
                     std::size_t horizon);

struct PsrlPrior {
  double alpha0 = -1.0;  // Dirichlet concentration; < 0 selects 1/|S|
  double reward_mean = 0.5;
  double reward_variance = 1.0;
  double observation_variance = 1.0;
};

// Samples one MDP from the posterior and plans on it exactly.
PlanResult psrl_plan(const DataBuffer& buffer, const PsrlPrior& prior,
                     std::size_t horizon, Rng& rng);

}  // namespace narl
