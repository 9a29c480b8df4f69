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

#include "narl/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace narl {

double RewardSamples::mean() const {
  if (size() == 0) return 0.0;
  double total = 0.0;
  for (const auto& [value, count] : real) total += value * static_cast<double>(count);
  for (const auto& [value, count] : fake) total += value * static_cast<double>(count);
  return total / static_cast<double>(size());
}

DataBuffer::DataBuffer(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states), num_actions_(num_actions),
      visit_(num_states * num_actions, 0),
      trans_count_(num_states * num_actions * num_states, 0),
      reward_sum_(num_states * num_actions, 0.0),
      samples_(num_states * num_actions) {}

std::uint64_t DataBuffer::state_visits(std::size_t s) const {
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < num_actions_; ++a) total += visits(s, a);
  return total;
}

std::uint64_t DataBuffer::total_visits() const {
  return std::accumulate(visit_.begin(), visit_.end(), std::uint64_t{0});
}

void DataBuffer::check(std::size_t s, std::size_t a, std::size_t next) const {
  if (s >= num_states_ || a >= num_actions_ || next >= num_states_) {
    throw std::invalid_argument("DataBuffer: observation outside buffer shape");
  }
}

void DataBuffer::record(std::size_t s, std::size_t a, double reward,
                        std::size_t next) {
  check(s, a, next);
  const std::size_t sa = s * num_actions_ + a;
  ++visit_[sa];
  ++trans_count_[sa * num_states_ + next];
  reward_sum_[sa] += reward;
  ++samples_[sa].real[reward];
  ++samples_[sa].real_count;
}

void DataBuffer::add_fake(std::size_t s, std::size_t a, double value,
                          std::uint64_t count) {
  check(s, a, 0);
  if (count == 0) return;
  RewardSamples& samples = samples_[s * num_actions_ + a];
  samples.fake[value] += count;
  samples.fake_count += count;
}

void update(DataBuffer& buffer, const Trajectory& traj) {
  for (const Step& step : traj.steps) {
    if (step.state >= buffer.num_states() ||
        step.next_state >= buffer.num_states() ||
        step.action >= buffer.num_actions()) {
      throw std::invalid_argument("update: trajectory does not match buffer shape");
    }
  }
  for (const Step& step : traj.steps) {
    buffer.record(step.state, step.action, step.reward, step.next_state);
  }
}

Estimate empirical_estimates(const DataBuffer& buffer, std::size_t s,
                             std::size_t a) {
  const std::size_t S = buffer.num_states();
  const std::uint64_t n = buffer.visits(s, a);
  Estimate out{0.0, std::vector<double>(S, 1.0 / static_cast<double>(S))};
  if (n == 0) return out;
  const double inv = 1.0 / static_cast<double>(n);
  out.r_hat = buffer.reward_sum(s, a) * inv;
  for (std::size_t j = 0; j < S; ++j) {
    out.p_hat[j] = static_cast<double>(buffer.transitions(s, a, j)) * inv;
  }
  return out;
}

EmpiricalModel empirical_model(const DataBuffer& buffer) {
  const std::size_t S = buffer.num_states(), A = buffer.num_actions();
  EmpiricalModel model{S, A, std::vector<double>(S * A),
                       std::vector<double>(S * A * S)};
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      Estimate e = empirical_estimates(buffer, s, a);
      model.r_hat[s * A + a] = e.r_hat;
      std::copy(e.p_hat.begin(), e.p_hat.end(),
                model.p_hat.begin() + (s * A + a) * S);
    }
  }
  return model;
}

namespace {
void check_delta(double delta_prime) {
  if (!(delta_prime > 0.0 && delta_prime < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0,1)");
  }
}
}  // namespace

double beta_r(std::uint64_t n, double delta_prime) {
  check_delta(delta_prime);
  const double m = static_cast<double>(n == 0 ? 1 : n);
  return std::sqrt(std::log(2.0 * std::sqrt(m + 1.0) / delta_prime) / m);
}

double beta_p(std::uint64_t n, double delta_prime, std::size_t num_states) {
  check_delta(delta_prime);
  const double m = static_cast<double>(n == 0 ? 1 : n);
  // log(sqrt(m+1) 2^S / delta') with 2^S kept in log space.
  const double log_term = 0.5 * std::log(m + 1.0) +
                          static_cast<double>(num_states) * std::log(2.0) -
                          std::log(delta_prime);
  return std::sqrt(4.0 * log_term / m);
}

ConfidenceConfig ConfidenceConfig::from_delta(double delta,
                                              std::size_t num_states,
                                              std::size_t num_actions,
                                              std::size_t episodes,
                                              std::size_t horizon) {
  check_delta(delta);
  ConfidenceConfig c;
  c.delta = delta;
  c.delta_prime =
      delta / (2.0 * static_cast<double>(num_states * num_actions));
  c.episode_budget = episodes;
  c.horizon = horizon;
  c.num_states = num_states;
  c.num_actions = num_actions;
  return c;
}

ConfidenceConfig ConfidenceConfig::from_failure_probability(
    double epsilon, std::size_t num_states, std::size_t num_actions,
    std::size_t episodes, std::size_t horizon) {
  check_delta(epsilon);
  const double T = static_cast<double>(episodes * horizon);
  return from_delta(epsilon / (4.0 * T), num_states, num_actions, episodes,
                    horizon);
}

bool event_holds(const DataBuffer& buffer, const FiniteMdp& mdp,
                 double delta_prime) {
  const std::size_t S = mdp.num_states(), A = mdp.num_actions();
  if (buffer.num_states() != S || buffer.num_actions() != A) {
    throw std::invalid_argument("event_holds: buffer/MDP shape mismatch");
  }
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::uint64_t n = buffer.visits(s, a);
      const Estimate e = empirical_estimates(buffer, s, a);
      if (std::abs(mdp.reward_mean(s, a) - e.r_hat) > beta_r(n, delta_prime)) {
        return false;
      }
      const auto p = mdp.transition(s, a);
      double l1 = 0.0;
      for (std::size_t j = 0; j < S; ++j) l1 += std::abs(p[j] - e.p_hat[j]);
      if (l1 > beta_p(n, delta_prime, S)) return false;
    }
  }
  return true;
}

}  // namespace narl
