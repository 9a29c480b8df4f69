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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "narl/mdp.hpp"
#include "narl/noise.hpp"
#include "narl/planners.hpp"
#include "narl/stats.hpp"

namespace narl {

enum class Algorithm {
  kNarlUcrlGaussian,
  kNarlUcbviGaussian,
  kNarlUcbviBootstrapFake,
  kNarlEnsembleBootstrap,
  kUcrl2,
  kPsrl,
  kOracle,  // replays the optimal policy of the true MDP; regret baseline
};

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);
// Noise mode an algorithm uses unless configured otherwise.
NoiseMode default_noise_mode(Algorithm algorithm);

struct AgentConfig {
  Algorithm algorithm = Algorithm::kNarlUcrlGaussian;
  NoiseConfig noise;
  // Confidence level; ignored when epsilon is set (delta = epsilon / 4T).
  double delta = 0.1;
  std::optional<double> epsilon;
  // Resolve M_r / M_P from min_ensemble_sizes instead of noise.m_r / m_p.
  bool auto_ensemble_sizes = false;
  // Model radius constraint for the ensemble-bootstrap backup.
  std::optional<double> radius_filter;
  PsrlPrior prior;

  // Throws std::invalid_argument when the noise mode does not fit the
  // algorithm.
  void validate() const;
};

struct EpisodeOutcome {
  PlanResult plan;
  Trajectory trajectory;
};

// One learning run: data buffer, noise streams and per-algorithm state.
class Agent {
 public:
  Agent(AgentConfig config, std::size_t num_states, std::size_t num_actions,
        std::size_t horizon, std::size_t episodes, std::uint64_t seed);

  // Plans for episode k (1-based), executes the greedy policy for H steps on
  // env and folds the trajectory into the buffer.
  EpisodeOutcome episode_step(const FiniteMdp& env, std::size_t k);

  PlanResult plan(const FiniteMdp& env, std::size_t k);
  void observe(const Trajectory& traj);

  const AgentConfig& config() const { return config_; }
  const NoiseConfig& noise() const { return noise_; }
  const ConfidenceConfig& confidence() const { return confidence_; }
  const DataBuffer& buffer() const { return buffer_; }
  std::size_t fake_samples_per_sign() const { return m_b_; }

 private:
  RewardSampleTable gaussian_reward_samples(std::size_t k) const;
  RewardSampleTable bootstrap_reward_samples(std::size_t k) const;

  AgentConfig config_;
  NoiseConfig noise_;
  ConfidenceConfig confidence_;
  std::size_t num_states_;
  std::size_t num_actions_;
  std::size_t horizon_;
  std::uint64_t seed_;
  std::size_t m_b_ = 0;
  DataBuffer buffer_;
  std::optional<EnsembleViews> views_;
  std::optional<ValueTable> prev_q_;
  Rng sim_rng_;
};

// Backup over M bootstrap views: per (s, a, h), the maximum over admissible
// views m of clip(r_hat^m) + <p_hat^m, V~^{h+1}>. With a radius filter, a view
// is admissible when its candidate lies within radius of the across-view mean;
// if none is, the view closest to the mean is used.
PlanResult narl_ensemble_bootstrap_plan(std::span<const EmpiricalModel> views,
                                        std::size_t horizon,
                                        std::optional<double> radius_filter);

struct OptimismGap {
  double optimism;          // V(pi*) - V~_k(pi_k)
  double estimation_error;  // V~_k(pi_k) - V(pi_k)
};

OptimismGap optimism_gap(const PlanResult& plan, const FiniteMdp& mdp,
                         double optimal_value);
OptimismGap optimism_gap(const PlanResult& plan, const FiniteMdp& mdp);

}  // namespace narl
