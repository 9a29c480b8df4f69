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

#include "narl/rng.hpp"

namespace narl {

// How a realized reward is drawn for one (s, a).
struct RewardSpec {
  enum class Kind { kDeterministic, kBernoulli, kClippedGaussian };

  Kind kind = Kind::kDeterministic;
  // Deterministic value, Bernoulli success probability, or pre-clipping mean.
  double location = 0.0;
  double scale = 0.0;  // Gaussian standard deviation; unused otherwise.

  static RewardSpec deterministic(double value) {
    return {Kind::kDeterministic, value, 0.0};
  }
  static RewardSpec bernoulli(double p) { return {Kind::kBernoulli, p, 0.0}; }
  static RewardSpec clipped_gaussian(double mu, double sigma) {
    return {Kind::kClippedGaussian, mu, sigma};
  }

  // Expected realized reward (after clipping for the Gaussian kind).
  double mean() const;
  double sample(Rng& rng) const;
};

// Finite-horizon tabular MDP (S, A, P, H, r, P0).
//
// Transition rows are stored densely as a |S||A| x |S| table. Reward means
// lie in [-1, 1]: the benchmark environments keep them in [0, 1] except Deep
// Sea, whose rightward move carries a small cost.
class FiniteMdp {
 public:
  FiniteMdp(std::size_t num_states, std::size_t num_actions,
            std::size_t horizon, std::vector<double> transition,
            std::vector<RewardSpec> rewards, std::vector<double> initial_dist);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t horizon() const { return horizon_; }

  std::span<const double> transition(std::size_t s, std::size_t a) const {
    return {transition_.data() + (s * num_actions_ + a) * num_states_,
            num_states_};
  }
  const std::vector<double>& transition_table() const { return transition_; }

  double reward_mean(std::size_t s, std::size_t a) const {
    return reward_mean_[s * num_actions_ + a];
  }
  const std::vector<double>& reward_mean_table() const { return reward_mean_; }
  const RewardSpec& reward_spec(std::size_t s, std::size_t a) const {
    return rewards_[s * num_actions_ + a];
  }

  std::span<const double> initial_dist() const { return initial_dist_; }

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  std::vector<double> transition_;
  std::vector<RewardSpec> rewards_;
  std::vector<double> reward_mean_;
  std::vector<double> initial_dist_;
};

// Deterministic nonstationary policy, action(h, s) for h in [0, H).
class Policy {
 public:
  Policy() = default;
  Policy(std::size_t horizon, std::size_t num_states, std::size_t fill = 0)
      : horizon_(horizon), num_states_(num_states),
        action_(horizon * num_states, fill) {}

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t& at(std::size_t h, std::size_t s) {
    return action_[h * num_states_ + s];
  }
  std::size_t at(std::size_t h, std::size_t s) const {
    return action_[h * num_states_ + s];
  }
  const std::vector<std::size_t>& actions() const { return action_; }

  bool operator==(const Policy&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::vector<std::size_t> action_;
};

// v has H+1 stages (the terminal row is zero); q has H stages.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(std::size_t horizon, std::size_t num_states,
             std::size_t num_actions)
      : horizon_(horizon), num_states_(num_states), num_actions_(num_actions),
        v_((horizon + 1) * num_states, 0.0),
        q_(horizon * num_states * num_actions, 0.0) {}

  std::size_t horizon() const { return horizon_; }
  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double& v(std::size_t h, std::size_t s) { return v_[h * num_states_ + s]; }
  double v(std::size_t h, std::size_t s) const {
    return v_[h * num_states_ + s];
  }
  double& q(std::size_t h, std::size_t s, std::size_t a) {
    return q_[(h * num_states_ + s) * num_actions_ + a];
  }
  double q(std::size_t h, std::size_t s, std::size_t a) const {
    return q_[(h * num_states_ + s) * num_actions_ + a];
  }
  std::span<const double> stage(std::size_t h) const {
    return {v_.data() + h * num_states_, num_states_};
  }
  const std::vector<double>& v_table() const { return v_; }
  const std::vector<double>& q_table() const { return q_; }

 private:
  std::size_t horizon_ = 0;
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> v_;
  std::vector<double> q_;
};

struct Step {
  std::size_t h;
  std::size_t state;
  std::size_t action;
  double reward;
  std::size_t next_state;

  bool operator==(const Step&) const = default;
};

struct Trajectory {
  std::vector<Step> steps;

  double total_reward() const;
  bool operator==(const Trajectory&) const = default;
};

struct Solution {
  ValueTable values;
  Policy policy;
};

struct PolicyEvaluation {
  ValueTable values;
  double value;  // <initial_dist, v[0]>
};

double dot(std::span<const double> a, std::span<const double> b);

// Lowest index wins ties.
std::size_t argmax(std::span<const double> xs);

Solution exact_value_iteration(const FiniteMdp& mdp);
PolicyEvaluation evaluate_policy(const FiniteMdp& mdp, const Policy& policy);
Trajectory simulate_episode(const FiniteMdp& mdp, const Policy& policy,
                            Rng& rng);

// Samples an index from a probability vector.
std::size_t sample_categorical(std::span<const double> probs, Rng& rng);

}  // namespace narl
