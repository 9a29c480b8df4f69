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
#include <span>
#include <string>
#include <vector>

#include "narl/mdp.hpp"
#include "narl/stats.hpp"

namespace narl {

enum class NoiseMode {
  kGaussianTheoryUcrl,   // sigma_r = 2 beta_r, sigma_P = 2 beta_P
  kGaussianTheoryUcbvi,  // sigma_r = 2 H beta_r, rewards only
  kGaussianPractical,    // variance c / N on rewards and (optionally) dynamics
  kEnsembleBootstrap,    // M views, each holding ~keep_prob of the data
  kFakeSampleBootstrap,  // 2 M_B fake +-1 rewards per real observation
};

std::string to_string(NoiseMode mode);
NoiseMode parse_noise_mode(const std::string& name);

struct NoiseConfig {
  NoiseMode mode = NoiseMode::kGaussianPractical;
  double c = 1.0;
  std::size_t m_r = 10;
  std::size_t m_p = 10;
  // Fake samples per sign and real observation; 0 selects ceil(H ln T).
  std::size_t m_b = 0;
  std::size_t ensemble_size = 10;
  double keep_prob = 0.5;
  // Standard deviation of the per-view pseudo-reward observation that seeds
  // every ensemble view; 0 disables it.
  double prior_scale = 1.0;
  // Gaussian modes only: add the dynamics noise vectors.
  bool perturb_dynamics = true;

  void validate() const;
  bool uses_dynamics_noise() const;
};

// Reward noise scale for a pair visited n times.
double gaussian_sigma_r(std::uint64_t n, const NoiseConfig& config,
                        const ConfidenceConfig& confidence);
// Per-coordinate dynamics noise scale for a pair visited n times.
double gaussian_sigma_p(std::uint64_t n, const NoiseConfig& config,
                        const ConfidenceConfig& confidence);

// Reward scalars xi(s, a, m) and dynamics vectors xi(s, a, m, .) for one
// episode. Dynamics are absent when m_p == 0.
class NoiseEnsemble {
 public:
  NoiseEnsemble() = default;
  NoiseEnsemble(std::size_t num_states, std::size_t num_actions,
                std::size_t m_r, std::size_t m_p);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t m_r() const { return m_r_; }
  std::size_t m_p() const { return m_p_; }
  bool has_dynamics() const { return m_p_ > 0; }

  double& reward(std::size_t s, std::size_t a, std::size_t m) {
    return reward_[(s * num_actions_ + a) * m_r_ + m];
  }
  double reward(std::size_t s, std::size_t a, std::size_t m) const {
    return reward_[(s * num_actions_ + a) * m_r_ + m];
  }
  std::span<double> dynamics(std::size_t s, std::size_t a, std::size_t m) {
    return {dynamics_.data() + ((s * num_actions_ + a) * m_p_ + m) * num_states_,
            num_states_};
  }
  std::span<const double> dynamics(std::size_t s, std::size_t a,
                                   std::size_t m) const {
    return {dynamics_.data() + ((s * num_actions_ + a) * m_p_ + m) * num_states_,
            num_states_};
  }

  bool operator==(const NoiseEnsemble&) const = default;

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::size_t m_r_ = 0;
  std::size_t m_p_ = 0;
  std::vector<double> reward_;
  std::vector<double> dynamics_;
};

// Draws the Gaussian ensemble for one episode. Every (s, a) pair uses its own
// substream keyed by (seed, episode, s, a), so draws do not depend on order.
NoiseEnsemble sample_noise_ensemble(const DataBuffer& buffer,
                                    const NoiseConfig& config,
                                    const ConfidenceConfig& confidence,
                                    std::uint64_t seed, std::uint64_t episode);

struct EnsembleSizes {
  std::size_t m_r;
  std::size_t m_p;
};
EnsembleSizes min_ensemble_sizes(std::size_t num_states,
                                 std::size_t num_actions, std::size_t horizon,
                                 double delta);

// ceil(H ln max(T, 3)).
std::size_t default_fake_samples(std::size_t horizon, std::size_t total_steps);

// Adds m_b copies of -1 and m_b copies of +1, tagged fake.
void inject_fake_samples(DataBuffer& buffer, std::size_t s, std::size_t a,
                         std::size_t m_b);

// Masked mean of the (s, a) buffer under an i.i.d. Bernoulli(1/2) mask over
// every sample, real and fake. An empty mask is redrawn.
double bootstrap_reward_sample(const DataBuffer& buffer, std::size_t s,
                               std::size_t a, Rng& rng);

// M bootstrap views of the data. Each real observation enters each view
// independently with probability keep_prob; the mask is drawn once, when the
// observation is inserted.
class EnsembleViews {
 public:
  EnsembleViews(std::size_t num_states, std::size_t num_actions,
                std::size_t ensemble_size, double keep_prob, double prior_scale,
                std::uint64_t seed);

  void update(const Trajectory& traj);

  std::size_t size() const { return views_.size(); }
  const DataBuffer& view(std::size_t m) const { return views_[m]; }
  double prior(std::size_t m, std::size_t s, std::size_t a) const {
    return prior_.empty() ? 0.0 : prior_[(m * num_states_ + s) * num_actions_ + a];
  }
  // Per-view estimates. With a prior, the pseudo-reward counts as one extra
  // observation in r_hat; p_hat uses the uniform convention when unvisited.
  EmpiricalModel model(std::size_t m) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  double keep_prob_;
  std::vector<DataBuffer> views_;
  std::vector<double> prior_;
  Rng rng_;
};

double clip_reward(double x);

// Lower bound on P(X - mu > t) for X ~ N(mu, sigma^2).
double gaussian_tail_lower_bound(double t, double sigma);

}  // namespace narl
