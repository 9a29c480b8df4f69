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

#include "narl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace narl {
namespace {

constexpr Algorithm kAlgorithms[] = {
    Algorithm::kNarlUcrlGaussian,       Algorithm::kNarlUcbviGaussian,
    Algorithm::kNarlUcbviBootstrapFake, Algorithm::kNarlEnsembleBootstrap,
    Algorithm::kUcrl2,                  Algorithm::kPsrl,
    Algorithm::kOracle};

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kNarlUcrlGaussian: return "narl-ucrl-gaussian";
    case Algorithm::kNarlUcbviGaussian: return "narl-ucbvi-gaussian";
    case Algorithm::kNarlUcbviBootstrapFake: return "narl-ucbvi-bootstrap-fake";
    case Algorithm::kNarlEnsembleBootstrap: return "narl-ensemble-bootstrap";
    case Algorithm::kUcrl2: return "ucrl2";
    case Algorithm::kPsrl: return "psrl";
    case Algorithm::kOracle: return "oracle";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : kAlgorithms) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

NoiseMode default_noise_mode(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kNarlUcbviGaussian: return NoiseMode::kGaussianTheoryUcbvi;
    case Algorithm::kNarlUcbviBootstrapFake: return NoiseMode::kFakeSampleBootstrap;
    case Algorithm::kNarlEnsembleBootstrap: return NoiseMode::kEnsembleBootstrap;
    default: return NoiseMode::kGaussianPractical;
  }
}

void AgentConfig::validate() const {
  noise.validate();
  const NoiseMode mode = noise.mode;
  bool ok = true;
  switch (algorithm) {
    case Algorithm::kNarlUcrlGaussian:
      ok = mode == NoiseMode::kGaussianTheoryUcrl ||
           mode == NoiseMode::kGaussianPractical;
      break;
    case Algorithm::kNarlUcbviGaussian:
      ok = mode == NoiseMode::kGaussianTheoryUcbvi ||
           mode == NoiseMode::kGaussianPractical;
      break;
    case Algorithm::kNarlUcbviBootstrapFake:
      ok = mode == NoiseMode::kFakeSampleBootstrap;
      break;
    case Algorithm::kNarlEnsembleBootstrap:
      ok = mode == NoiseMode::kEnsembleBootstrap;
      break;
    default:
      break;  // baselines ignore the noise block
  }
  if (!ok) {
    throw std::invalid_argument("noise mode " + to_string(mode) +
                                " is not valid for " + to_string(algorithm));
  }
  if (!epsilon && !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1)");
  }
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1)");
  }
  if (radius_filter && !(*radius_filter >= 0.0)) {
    throw std::invalid_argument("radius_filter must be >= 0");
  }
}

Agent::Agent(AgentConfig config, std::size_t num_states,
             std::size_t num_actions, std::size_t horizon,
             std::size_t episodes, std::uint64_t seed)
    : config_(std::move(config)), noise_(config_.noise),
      num_states_(num_states), num_actions_(num_actions), horizon_(horizon),
      seed_(seed), buffer_(num_states, num_actions),
      sim_rng_(make_stream(seed, Stream::kSimulation)) {
  config_.validate();
  confidence_ =
      config_.epsilon
          ? ConfidenceConfig::from_failure_probability(
                *config_.epsilon, num_states, num_actions, episodes, horizon)
          : ConfidenceConfig::from_delta(config_.delta, num_states, num_actions,
                                         episodes, horizon);
  if (config_.auto_ensemble_sizes) {
    const EnsembleSizes sizes =
        min_ensemble_sizes(num_states, num_actions, horizon, confidence_.delta);
    noise_.m_r = sizes.m_r;
    noise_.m_p = sizes.m_p;
  }
  if (config_.algorithm == Algorithm::kNarlUcbviGaussian) {
    noise_.perturb_dynamics = false;
  }
  if (config_.algorithm == Algorithm::kNarlUcbviBootstrapFake) {
    m_b_ = noise_.m_b > 0 ? noise_.m_b
                          : default_fake_samples(horizon, confidence_.total_steps());
  }
  if (config_.algorithm == Algorithm::kNarlEnsembleBootstrap) {
    views_.emplace(num_states, num_actions, noise_.ensemble_size,
                   noise_.keep_prob, noise_.prior_scale, seed);
  }
}

RewardSampleTable Agent::gaussian_reward_samples(std::size_t k) const {
  const NoiseEnsemble ensemble =
      sample_noise_ensemble(buffer_, noise_, confidence_, seed_, k);
  RewardSampleTable table(num_states_, num_actions_, noise_.m_r);
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      const double r_hat = empirical_estimates(buffer_, s, a).r_hat;
      for (std::size_t m = 0; m < noise_.m_r; ++m) {
        table.at(s, a, m) = r_hat + ensemble.reward(s, a, m);
      }
    }
  }
  return table;
}

RewardSampleTable Agent::bootstrap_reward_samples(std::size_t k) const {
  RewardSampleTable table(num_states_, num_actions_, noise_.m_r);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      Rng rng = make_stream(seed_, Stream::kBootstrap, {k, s, a});
      const bool empty = buffer_.rewards(s, a).size() == 0;
      for (std::size_t m = 0; m < noise_.m_r; ++m) {
        // Unvisited pairs fall back to r_hat = 0 plus unit Gaussian noise.
        table.at(s, a, m) =
            empty ? normal(rng) : bootstrap_reward_sample(buffer_, s, a, rng);
      }
    }
  }
  return table;
}

PlanResult Agent::plan(const FiniteMdp& env, std::size_t k) {
  if (env.num_states() != num_states_ || env.num_actions() != num_actions_ ||
      env.horizon() != horizon_) {
    throw std::invalid_argument("agent and environment shapes differ");
  }
  const std::size_t S = num_states_, A = num_actions_;
  switch (config_.algorithm) {
    case Algorithm::kNarlUcrlGaussian: {
      const NoiseEnsemble ensemble =
          sample_noise_ensemble(buffer_, noise_, confidence_, seed_, k);
      return naevi(empirical_model(buffer_), ensemble, horizon_);
    }
    case Algorithm::kNarlUcbviGaussian:
    case Algorithm::kNarlUcbviBootstrapFake: {
      const RewardSampleTable samples =
          config_.algorithm == Algorithm::kNarlUcbviGaussian
              ? gaussian_reward_samples(k)
              : bootstrap_reward_samples(k);
      PlanResult result = navi(samples, empirical_model(buffer_), horizon_,
                               prev_q_ ? &*prev_q_ : nullptr);
      prev_q_ = result.values;
      return result;
    }
    case Algorithm::kNarlEnsembleBootstrap: {
      std::vector<EmpiricalModel> models;
      models.reserve(views_->size());
      for (std::size_t m = 0; m < views_->size(); ++m) {
        models.push_back(views_->model(m));
      }
      return narl_ensemble_bootstrap_plan(models, horizon_, config_.radius_filter);
    }
    case Algorithm::kUcrl2: {
      std::vector<double> radius_r(S * A), radius_p(S * A);
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
          const std::uint64_t n = buffer_.visits(s, a);
          radius_r[s * A + a] = beta_r(n, confidence_.delta_prime);
          radius_p[s * A + a] = beta_p(n, confidence_.delta_prime, S);
        }
      }
      return evi_ucrl2(empirical_model(buffer_), radius_r, radius_p, horizon_);
    }
    case Algorithm::kPsrl: {
      Rng rng = make_stream(seed_, Stream::kPosterior, {k});
      return psrl_plan(buffer_, config_.prior, horizon_, rng);
    }
    case Algorithm::kOracle: {
      Solution solution = exact_value_iteration(env);
      PlanResult result{std::move(solution.values), std::move(solution.policy),
                        env.reward_mean_table(), env.transition_table()};
      return result;
    }
  }
  throw std::logic_error("unhandled algorithm");
}

void Agent::observe(const Trajectory& traj) {
  update(buffer_, traj);
  if (m_b_ > 0) {
    for (const Step& step : traj.steps) {
      inject_fake_samples(buffer_, step.state, step.action, m_b_);
    }
  }
  if (views_) views_->update(traj);
}

EpisodeOutcome Agent::episode_step(const FiniteMdp& env, std::size_t k) {
  EpisodeOutcome out{plan(env, k), {}};
  out.trajectory = simulate_episode(env, out.plan.policy, sim_rng_);
  observe(out.trajectory);
  return out;
}

PlanResult narl_ensemble_bootstrap_plan(std::span<const EmpiricalModel> views,
                                        std::size_t horizon,
                                        std::optional<double> radius_filter) {
  if (views.empty()) {
    throw std::invalid_argument("ensemble bootstrap: at least one view required");
  }
  const std::size_t S = views[0].num_states, A = views[0].num_actions;
  for (const EmpiricalModel& view : views) {
    if (view.num_states != S || view.num_actions != A ||
        view.r_hat.size() != S * A || view.p_hat.size() != S * A * S) {
      throw std::invalid_argument("ensemble bootstrap: views differ in shape");
    }
  }
  const std::size_t M = views.size();
  PlanResult out{ValueTable(horizon, S, A), Policy(horizon, S),
                 std::vector<double>(S * A), std::vector<double>(S * A * S)};
  std::vector<double> candidate(M);
  for (std::size_t h = horizon; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t sa = s * A + a;
        double mean = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
          candidate[m] = clip_reward(views[m].r_hat[sa]) +
                         dot(views[m].row(s, a), next);
          mean += candidate[m];
        }
        mean /= static_cast<double>(M);
        std::size_t chosen = M;
        for (std::size_t m = 0; m < M; ++m) {
          if (radius_filter && std::abs(candidate[m] - mean) > *radius_filter) {
            continue;
          }
          if (chosen == M || candidate[m] > candidate[chosen]) chosen = m;
        }
        if (chosen == M) {
          chosen = 0;
          for (std::size_t m = 1; m < M; ++m) {
            if (std::abs(candidate[m] - mean) <
                std::abs(candidate[chosen] - mean)) {
              chosen = m;
            }
          }
        }
        out.values.q(h, s, a) = candidate[chosen];
        if (h == 0) {
          out.chosen_reward[sa] = clip_reward(views[chosen].r_hat[sa]);
          const auto row = views[chosen].row(s, a);
          std::copy(row.begin(), row.end(), out.chosen_dynamics.begin() + sa * S);
        }
      }
      std::size_t best = 0;
      for (std::size_t a = 1; a < A; ++a) {
        if (out.values.q(h, s, a) > out.values.q(h, s, best)) best = a;
      }
      out.policy.at(h, s) = best;
      out.values.v(h, s) = out.values.q(h, s, best);
    }
  }
  return out;
}

OptimismGap optimism_gap(const PlanResult& plan, const FiniteMdp& mdp,
                         double optimal_value) {
  const double optimistic = plan.start_value(mdp.initial_dist());
  const double realized = evaluate_policy(mdp, plan.policy).value;
  return {optimal_value - optimistic, optimistic - realized};
}

OptimismGap optimism_gap(const PlanResult& plan, const FiniteMdp& mdp) {
  const Solution best = exact_value_iteration(mdp);
  return optimism_gap(plan, mdp, dot(mdp.initial_dist(), best.values.stage(0)));
}

}  // namespace narl
