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

#include "narl/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace narl {

std::string to_string(NoiseMode mode) {
  switch (mode) {
    case NoiseMode::kGaussianTheoryUcrl: return "gaussian-theory-ucrl";
    case NoiseMode::kGaussianTheoryUcbvi: return "gaussian-theory-ucbvi";
    case NoiseMode::kGaussianPractical: return "gaussian-practical";
    case NoiseMode::kEnsembleBootstrap: return "ensemble-bootstrap";
    case NoiseMode::kFakeSampleBootstrap: return "fake-sample-bootstrap";
  }
  return "unknown";
}

NoiseMode parse_noise_mode(const std::string& name) {
  for (NoiseMode mode :
       {NoiseMode::kGaussianTheoryUcrl, NoiseMode::kGaussianTheoryUcbvi,
        NoiseMode::kGaussianPractical, NoiseMode::kEnsembleBootstrap,
        NoiseMode::kFakeSampleBootstrap}) {
    if (to_string(mode) == name) return mode;
  }
  throw std::invalid_argument("unknown noise mode '" + name + "'");
}

void NoiseConfig::validate() const {
  if (m_r < 1) throw std::invalid_argument("noise: M_r must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("noise: c must be > 0");
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw std::invalid_argument("noise: keep_prob must lie in (0,1]");
  }
  if (mode == NoiseMode::kEnsembleBootstrap && ensemble_size < 1) {
    throw std::invalid_argument("noise: ensemble size M must be >= 1");
  }
  if (!(prior_scale >= 0.0)) {
    throw std::invalid_argument("noise: prior_scale must be >= 0");
  }
}

bool NoiseConfig::uses_dynamics_noise() const {
  return perturb_dynamics && m_p > 0 &&
         (mode == NoiseMode::kGaussianTheoryUcrl ||
          mode == NoiseMode::kGaussianPractical);
}

double gaussian_sigma_r(std::uint64_t n, const NoiseConfig& config,
                        const ConfidenceConfig& confidence) {
  switch (config.mode) {
    case NoiseMode::kGaussianTheoryUcrl:
      if (n == 0) return 1.0;
      return 2.0 * beta_r(n, confidence.delta_prime);
    case NoiseMode::kGaussianTheoryUcbvi:
      if (n == 0) return 1.0;
      return 2.0 * static_cast<double>(confidence.horizon) *
             beta_r(n, confidence.delta_prime);
    case NoiseMode::kGaussianPractical:
      return std::sqrt(config.c / static_cast<double>(std::max<std::uint64_t>(n, 1)));
    default:
      throw std::invalid_argument("gaussian_sigma_r: not a Gaussian noise mode");
  }
}

double gaussian_sigma_p(std::uint64_t n, const NoiseConfig& config,
                        const ConfidenceConfig& confidence) {
  switch (config.mode) {
    case NoiseMode::kGaussianTheoryUcrl:
    case NoiseMode::kGaussianTheoryUcbvi:
      if (n == 0) return 1.0;
      // The dynamics radius is taken at delta / (|S||A|) = 2 delta'.
      return 2.0 * beta_p(n, 2.0 * confidence.delta_prime, confidence.num_states);
    case NoiseMode::kGaussianPractical:
      return std::sqrt(config.c / static_cast<double>(std::max<std::uint64_t>(n, 1)));
    default:
      throw std::invalid_argument("gaussian_sigma_p: not a Gaussian noise mode");
  }
}

NoiseEnsemble::NoiseEnsemble(std::size_t num_states, std::size_t num_actions,
                             std::size_t m_r, std::size_t m_p)
    : num_states_(num_states), num_actions_(num_actions), m_r_(m_r), m_p_(m_p),
      reward_(num_states * num_actions * m_r, 0.0),
      dynamics_(num_states * num_actions * m_p * num_states, 0.0) {}

NoiseEnsemble sample_noise_ensemble(const DataBuffer& buffer,
                                    const NoiseConfig& config,
                                    const ConfidenceConfig& confidence,
                                    std::uint64_t seed, std::uint64_t episode) {
  config.validate();
  const std::size_t S = buffer.num_states(), A = buffer.num_actions();
  const std::size_t m_p = config.uses_dynamics_noise() ? config.m_p : 0;
  NoiseEnsemble out(S, A, config.m_r, m_p);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::uint64_t n = buffer.visits(s, a);
      const double sigma_r = gaussian_sigma_r(n, config, confidence);
      Rng rng = make_stream(seed, Stream::kRewardNoise, {episode, s, a});
      normal.reset();
      for (std::size_t m = 0; m < config.m_r; ++m) {
        out.reward(s, a, m) = sigma_r * normal(rng);
      }
      if (m_p == 0) continue;
      const double sigma_p = gaussian_sigma_p(n, config, confidence);
      Rng dyn = make_stream(seed, Stream::kDynamicsNoise, {episode, s, a});
      normal.reset();
      for (std::size_t m = 0; m < m_p; ++m) {
        for (double& x : out.dynamics(s, a, m)) x = sigma_p * normal(dyn);
      }
    }
  }
  return out;
}

EnsembleSizes min_ensemble_sizes(std::size_t num_states,
                                 std::size_t num_actions, std::size_t horizon,
                                 double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("min_ensemble_sizes: delta must lie in (0,1)");
  }
  const double S = static_cast<double>(num_states);
  const double A = static_cast<double>(num_actions);
  const double H = static_cast<double>(horizon);
  const double m_r = std::log(2.0 * S * A * H / delta) / 3.0;
  const double m_p = 3.0 + std::log(2.0 * A * H / delta) / 3.0;
  return {static_cast<std::size_t>(std::max(1.0, std::ceil(m_r))),
          static_cast<std::size_t>(std::ceil(m_p))};
}

std::size_t default_fake_samples(std::size_t horizon, std::size_t total_steps) {
  const double T = static_cast<double>(std::max<std::size_t>(total_steps, 3));
  return static_cast<std::size_t>(
      std::ceil(static_cast<double>(horizon) * std::log(T)));
}

void inject_fake_samples(DataBuffer& buffer, std::size_t s, std::size_t a,
                         std::size_t m_b) {
  buffer.add_fake(s, a, -1.0, m_b);
  buffer.add_fake(s, a, 1.0, m_b);
}

double bootstrap_reward_sample(const DataBuffer& buffer, std::size_t s,
                               std::size_t a, Rng& rng) {
  const RewardSamples& samples = buffer.rewards(s, a);
  if (samples.size() == 0) {
    throw std::invalid_argument("bootstrap_reward_sample: empty buffer at (s,a)");
  }
  // A Bernoulli(1/2) mask over c equal samples selects Binomial(c, 1/2) of
  // them, so each atom is thinned in one draw.
  for (;;) {
    double total = 0.0;
    std::uint64_t kept = 0;
    auto thin = [&](const std::map<double, std::uint64_t>& atoms) {
      for (const auto& [value, count] : atoms) {
        const std::uint64_t k =
            std::binomial_distribution<std::uint64_t>(count, 0.5)(rng);
        total += value * static_cast<double>(k);
        kept += k;
      }
    };
    thin(samples.real);
    thin(samples.fake);
    if (kept > 0) return total / static_cast<double>(kept);
  }
}

EnsembleViews::EnsembleViews(std::size_t num_states, std::size_t num_actions,
                             std::size_t ensemble_size, double keep_prob,
                             double prior_scale, std::uint64_t seed)
    : num_states_(num_states), num_actions_(num_actions), keep_prob_(keep_prob),
      views_(ensemble_size, DataBuffer(num_states, num_actions)),
      rng_(make_stream(seed, Stream::kViewMasks)) {
  if (ensemble_size == 0) {
    throw std::invalid_argument("EnsembleViews: M must be >= 1");
  }
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) {
    throw std::invalid_argument("EnsembleViews: keep_prob must lie in (0,1]");
  }
  if (prior_scale > 0.0) {
    Rng prior_rng = make_stream(seed, Stream::kViewPrior);
    std::normal_distribution<double> normal(0.0, prior_scale);
    prior_.resize(ensemble_size * num_states * num_actions);
    for (double& x : prior_) x = normal(prior_rng);
  }
}

void EnsembleViews::update(const Trajectory& traj) {
  std::bernoulli_distribution keep(keep_prob_);
  for (const Step& step : traj.steps) {
    for (DataBuffer& view : views_) {
      if (keep_prob_ >= 1.0 || keep(rng_)) {
        view.record(step.state, step.action, step.reward, step.next_state);
      }
    }
  }
}

EmpiricalModel EnsembleViews::model(std::size_t m) const {
  EmpiricalModel out = empirical_model(views_[m]);
  if (prior_.empty()) return out;
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      const double n = static_cast<double>(views_[m].visits(s, a));
      out.r_hat[s * num_actions_ + a] =
          (prior(m, s, a) + views_[m].reward_sum(s, a)) / (n + 1.0);
    }
  }
  return out;
}

double clip_reward(double x) { return std::clamp(x, 0.0, 1.0); }

double gaussian_tail_lower_bound(double t, double sigma) {
  if (!(t > 0.0 && sigma > 0.0)) {
    throw std::invalid_argument("gaussian_tail_lower_bound: t and sigma must be > 0");
  }
  return sigma * t / (t * t + sigma * sigma) *
         std::exp(-t * t / (2.0 * sigma * sigma)) / std::sqrt(2.0 * M_PI);
}

}  // namespace narl
