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
#include <map>
#include <span>
#include <vector>

#include "narl/mdp.hpp"

namespace narl {

// Multiset of reward samples for one (s, a). Equal values are coalesced into
// one atom with a multiplicity, which keeps the fake-sample bootstrap cheap
// when M_B is in the hundreds.
struct RewardSamples {
  std::map<double, std::uint64_t> real;
  std::map<double, std::uint64_t> fake;
  std::uint64_t real_count = 0;
  std::uint64_t fake_count = 0;

  std::uint64_t size() const { return real_count + fake_count; }
  double mean() const;  // over real and fake samples
  bool operator==(const RewardSamples&) const = default;
};

// Visit counts, transition counts and reward samples, N_k(s, a) and D(s, a).
class DataBuffer {
 public:
  DataBuffer() = default;
  DataBuffer(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  std::uint64_t visits(std::size_t s, std::size_t a) const {
    return visit_[s * num_actions_ + a];
  }
  std::uint64_t state_visits(std::size_t s) const;
  std::uint64_t total_visits() const;
  std::uint64_t transitions(std::size_t s, std::size_t a,
                            std::size_t next) const {
    return trans_count_[(s * num_actions_ + a) * num_states_ + next];
  }
  double reward_sum(std::size_t s, std::size_t a) const {
    return reward_sum_[s * num_actions_ + a];
  }
  const RewardSamples& rewards(std::size_t s, std::size_t a) const {
    return samples_[s * num_actions_ + a];
  }

  // One real observation (s, a, r, s').
  void record(std::size_t s, std::size_t a, double reward, std::size_t next);
  // count copies of the fake reward `value`.
  void add_fake(std::size_t s, std::size_t a, double value,
                std::uint64_t count);

  bool operator==(const DataBuffer&) const = default;

 private:
  void check(std::size_t s, std::size_t a, std::size_t next) const;

  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<std::uint64_t> visit_;
  std::vector<std::uint64_t> trans_count_;
  std::vector<double> reward_sum_;
  std::vector<RewardSamples> samples_;
};

void update(DataBuffer& buffer, const Trajectory& traj);

struct Estimate {
  double r_hat;
  std::vector<double> p_hat;
};

// Unvisited pairs yield r_hat = 0 and a uniform p_hat.
Estimate empirical_estimates(const DataBuffer& buffer, std::size_t s,
                             std::size_t a);

// Estimates for every pair: r_hat is |S||A|, p_hat is |S||A| x |S|.
struct EmpiricalModel {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> r_hat;
  std::vector<double> p_hat;

  std::span<const double> row(std::size_t s, std::size_t a) const {
    return {p_hat.data() + (s * num_actions + a) * num_states, num_states};
  }
};
EmpiricalModel empirical_model(const DataBuffer& buffer);

// Time-uniform Hoeffding radius for rewards. n = 0 is evaluated at n = 1.
double beta_r(std::uint64_t n, double delta_prime);
// Time-uniform L1 radius for transition rows. n = 0 is evaluated at n = 1.
double beta_p(std::uint64_t n, double delta_prime, std::size_t num_states);

struct ConfidenceConfig {
  double delta = 0.1;
  double delta_prime = 0.1 / 8.0;
  std::size_t episode_budget = 1;
  std::size_t horizon = 1;
  std::size_t num_states = 1;
  std::size_t num_actions = 1;

  // delta' = delta / (2|S||A|).
  static ConfidenceConfig from_delta(double delta, std::size_t num_states,
                                     std::size_t num_actions,
                                     std::size_t episodes, std::size_t horizon);
  // delta = epsilon / (4T) with T = K H.
  static ConfidenceConfig from_failure_probability(double epsilon,
                                                   std::size_t num_states,
                                                   std::size_t num_actions,
                                                   std::size_t episodes,
                                                   std::size_t horizon);
  std::size_t total_steps() const { return episode_budget * horizon; }
};

// True iff every empirical reward and transition row lies within its radius
// of the truth.
bool event_holds(const DataBuffer& buffer, const FiniteMdp& mdp,
                 double delta_prime);

}  // namespace narl
