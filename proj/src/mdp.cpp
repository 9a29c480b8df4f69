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

#include "narl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace narl {
namespace {

constexpr double kRowTolerance = 1e-12;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

void check_distribution(std::span<const double> p, const std::string& what) {
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw std::invalid_argument(what + " has a negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > kRowTolerance) {
    throw std::invalid_argument(what + " does not sum to 1");
  }
}

}  // namespace

double RewardSpec::mean() const {
  switch (kind) {
    case Kind::kDeterministic:
    case Kind::kBernoulli:
      return location;
    case Kind::kClippedGaussian: {
      if (scale == 0.0) return std::clamp(location, 0.0, 1.0);
      const double lo = (0.0 - location) / scale;
      const double hi = (1.0 - location) / scale;
      const double inside = location * (normal_cdf(hi) - normal_cdf(lo)) +
                            scale * (normal_pdf(lo) - normal_pdf(hi));
      return inside + (1.0 - normal_cdf(hi));
    }
  }
  return 0.0;
}

double RewardSpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::kDeterministic:
      return location;
    case Kind::kBernoulli:
      return std::bernoulli_distribution(location)(rng) ? 1.0 : 0.0;
    case Kind::kClippedGaussian:
      if (scale == 0.0) return std::clamp(location, 0.0, 1.0);
      return std::clamp(std::normal_distribution<double>(location, scale)(rng),
                        0.0, 1.0);
  }
  return 0.0;
}

FiniteMdp::FiniteMdp(std::size_t num_states, std::size_t num_actions,
                     std::size_t horizon, std::vector<double> transition,
                     std::vector<RewardSpec> rewards,
                     std::vector<double> initial_dist)
    : num_states_(num_states), num_actions_(num_actions), horizon_(horizon),
      transition_(std::move(transition)), rewards_(std::move(rewards)),
      initial_dist_(std::move(initial_dist)) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw std::invalid_argument("FiniteMdp: empty state or action set");
  }
  if (horizon_ == 0) throw std::invalid_argument("FiniteMdp: horizon must be >= 1");
  const std::size_t pairs = num_states_ * num_actions_;
  if (transition_.size() != pairs * num_states_ || rewards_.size() != pairs ||
      initial_dist_.size() != num_states_) {
    throw std::invalid_argument("FiniteMdp: table dimensions do not match");
  }
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      check_distribution(this->transition(s, a),
                         "transition row (" + std::to_string(s) + "," +
                             std::to_string(a) + ")");
    }
  }
  check_distribution(initial_dist_, "initial distribution");
  reward_mean_.reserve(pairs);
  for (const RewardSpec& spec : rewards_) {
    if (spec.kind == RewardSpec::Kind::kBernoulli &&
        !(spec.location >= 0.0 && spec.location <= 1.0)) {
      throw std::invalid_argument("FiniteMdp: Bernoulli parameter outside [0,1]");
    }
    if (!(spec.scale >= 0.0)) {
      throw std::invalid_argument("FiniteMdp: negative reward scale");
    }
    const double mean = spec.mean();
    if (!(mean >= -1.0 && mean <= 1.0)) {
      throw std::invalid_argument("FiniteMdp: reward mean outside [-1,1]");
    }
    reward_mean_.push_back(mean);
  }
}

double Trajectory::total_reward() const {
  double total = 0.0;
  for (const Step& step : steps) total += step.reward;
  return total;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::size_t argmax(std::span<const double> xs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] > xs[best]) best = i;
  }
  return best;
}

Solution exact_value_iteration(const FiniteMdp& mdp) {
  const std::size_t S = mdp.num_states(), A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  Solution out{ValueTable(H, S, A), Policy(H, S)};
  std::vector<double> row(A);
  for (std::size_t h = H; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        row[a] = mdp.reward_mean(s, a) + dot(mdp.transition(s, a), next);
        out.values.q(h, s, a) = row[a];
      }
      const std::size_t best = argmax(row);
      out.policy.at(h, s) = best;
      out.values.v(h, s) = row[best];
    }
  }
  return out;
}

PolicyEvaluation evaluate_policy(const FiniteMdp& mdp, const Policy& policy) {
  const std::size_t S = mdp.num_states(), A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  if (policy.horizon() != H || policy.num_states() != S) {
    throw std::invalid_argument("evaluate_policy: policy shape mismatch");
  }
  PolicyEvaluation out{ValueTable(H, S, A), 0.0};
  for (std::size_t h = H; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        out.values.q(h, s, a) =
            mdp.reward_mean(s, a) + dot(mdp.transition(s, a), next);
      }
      const std::size_t a = policy.at(h, s);
      if (a >= A) throw std::invalid_argument("evaluate_policy: invalid action");
      out.values.v(h, s) = out.values.q(h, s, a);
    }
  }
  out.value = dot(mdp.initial_dist(), out.values.stage(0));
  return out;
}

std::size_t sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

Trajectory simulate_episode(const FiniteMdp& mdp, const Policy& policy,
                            Rng& rng) {
  if (policy.horizon() != mdp.horizon() ||
      policy.num_states() != mdp.num_states()) {
    throw std::invalid_argument("simulate_episode: policy shape mismatch");
  }
  Trajectory traj;
  traj.steps.reserve(mdp.horizon());
  std::size_t s = sample_categorical(mdp.initial_dist(), rng);
  for (std::size_t h = 0; h < mdp.horizon(); ++h) {
    const std::size_t a = policy.at(h, s);
    const double r = mdp.reward_spec(s, a).sample(rng);
    const std::size_t next = sample_categorical(mdp.transition(s, a), rng);
    traj.steps.push_back({h, s, a, r, next});
    s = next;
  }
  return traj;
}

}  // namespace narl
