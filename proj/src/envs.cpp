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

#include "narl/envs.hpp"

#include <stdexcept>

namespace narl {
namespace {

struct Builder {
  std::size_t S, A;
  std::vector<double> transition;
  std::vector<RewardSpec> rewards;

  Builder(std::size_t s, std::size_t a)
      : S(s), A(a), transition(s * a * s, 0.0),
        rewards(s * a, RewardSpec::deterministic(0.0)) {}

  double& p(std::size_t s, std::size_t a, std::size_t next) {
    return transition[(s * A + a) * S + next];
  }
  void reward(std::size_t s, std::size_t a, double value) {
    rewards[s * A + a] = RewardSpec::deterministic(value);
  }
  FiniteMdp build(std::size_t horizon, std::size_t start) {
    std::vector<double> init(S, 0.0);
    init[start] = 1.0;
    return FiniteMdp(S, A, horizon, std::move(transition), std::move(rewards),
                     std::move(init));
  }
};

}  // namespace

FiniteMdp make_riverswim(std::size_t n, std::size_t horizon) {
  using namespace riverswim;
  if (n < 2) throw std::invalid_argument("riverswim: n must be >= 2");
  if (horizon < 1) throw std::invalid_argument("riverswim: horizon must be >= 1");
  Builder b(n, 2);
  for (std::size_t s = 0; s < n; ++s) {
    b.p(s, kLeft, s == 0 ? 0 : s - 1) = 1.0;
    if (s == 0) {
      b.p(s, kRight, 1) = 0.6;
      b.p(s, kRight, 0) = 0.4;
    } else if (s == n - 1) {
      b.p(s, kRight, s) = 0.6;
      b.p(s, kRight, s - 1) = 0.4;
    } else {
      b.p(s, kRight, s + 1) = 0.35;
      b.p(s, kRight, s) = 0.6;
      b.p(s, kRight, s - 1) = 0.05;
    }
  }
  b.reward(0, kLeft, kLeftBankReward);
  b.reward(n - 1, kRight, 1.0);
  return b.build(horizon, 0);
}

FiniteMdp make_chain(std::size_t n, std::size_t horizon, double slip) {
  using namespace chain;
  if (n < 2) throw std::invalid_argument("chain: n must be >= 2");
  if (horizon < 1) throw std::invalid_argument("chain: horizon must be >= 1");
  if (!(slip >= 0.0 && slip < 1.0)) {
    throw std::invalid_argument("chain: slip must lie in [0,1)");
  }
  Builder b(n, 2);
  for (std::size_t s = 0; s < n; ++s) {
    b.p(s, kBack, 0) = 1.0;
    if (s == n - 1) {
      b.p(s, kForward, s) = 1.0;
    } else {
      b.p(s, kForward, s + 1) += 1.0 - slip;
      b.p(s, kForward, s) += slip;
    }
  }
  b.reward(0, kBack, kBackReward);
  b.reward(n - 1, kForward, 1.0);
  return b.build(horizon, 0);
}

std::vector<std::size_t> deep_sea_right_actions(std::size_t n,
                                                std::uint64_t action_map_seed) {
  Rng rng = make_stream(action_map_seed, Stream::kEnvironment);
  std::vector<std::size_t> map(n * n);
  for (auto& bit : map) bit = static_cast<std::size_t>(rng() >> 63);
  return map;
}

FiniteMdp make_deep_sea(std::size_t n, std::uint64_t action_map_seed) {
  if (n < 2) throw std::invalid_argument("deepsea: n must be >= 2");
  const auto right = deep_sea_right_actions(n, action_map_seed);
  const double step_cost = deep_sea::kMoveCost / static_cast<double>(n);
  Builder b(n * n, 2);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      const std::size_t s = deep_sea::cell(n, row, col);
      for (std::size_t raw = 0; raw < 2; ++raw) {
        const bool moves_right = raw == right[s];
        const std::size_t next_col =
            moves_right ? std::min(col + 1, n - 1) : (col == 0 ? 0 : col - 1);
        // The last row's successor is never used within the horizon.
        const std::size_t next_row = row + 1 < n ? row + 1 : 0;
        b.p(s, raw, deep_sea::cell(n, next_row, next_col)) = 1.0;
        double r = moves_right ? -step_cost : 0.0;
        if (moves_right && row == n - 1 && col == n - 1) r += 1.0;
        b.reward(s, raw, r);
      }
    }
  }
  return b.build(n, 0);
}

Policy deep_sea_constant_policy(std::size_t n, std::uint64_t action_map_seed,
                                bool right) {
  const auto map = deep_sea_right_actions(n, action_map_seed);
  Policy policy(n, n * n);
  for (std::size_t h = 0; h < n; ++h) {
    for (std::size_t s = 0; s < n * n; ++s) {
      policy.at(h, s) = right ? map[s] : 1 - map[s];
    }
  }
  return policy;
}

FiniteMdp make_random_mdp(std::size_t num_states, std::size_t num_actions,
                          std::size_t horizon, std::uint64_t seed) {
  if (num_states == 0 || num_actions == 0 || horizon == 0) {
    throw std::invalid_argument("random: dimensions must be >= 1");
  }
  Rng rng = make_stream(seed, Stream::kEnvironment);
  std::exponential_distribution<double> gamma1(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t S = num_states, A = num_actions;
  std::vector<double> transition(S * A * S);
  std::vector<RewardSpec> rewards;
  rewards.reserve(S * A);
  for (std::size_t sa = 0; sa < S * A; ++sa) {
    double total = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
      transition[sa * S + j] = gamma1(rng);
      total += transition[sa * S + j];
    }
    for (std::size_t j = 0; j < S; ++j) transition[sa * S + j] /= total;
    rewards.push_back(RewardSpec::bernoulli(unit(rng)));
  }
  std::vector<double> init(S, 1.0 / static_cast<double>(S));
  return FiniteMdp(S, A, horizon, std::move(transition), std::move(rewards),
                   std::move(init));
}

std::string EnvSpec::label() const {
  if (name == "riverswim" || name == "chain") {
    return name + "-" + std::to_string(n) + "-" + std::to_string(horizon);
  }
  if (name == "deepsea") return "deepsea-" + std::to_string(n);
  return "random-" + std::to_string(num_states) + "-" +
         std::to_string(num_actions) + "-" + std::to_string(horizon);
}

FiniteMdp make_env(const EnvSpec& spec, std::uint64_t env_seed) {
  if (spec.name == "riverswim") return make_riverswim(spec.n, spec.horizon);
  if (spec.name == "chain") return make_chain(spec.n, spec.horizon, spec.slip);
  if (spec.name == "deepsea") return make_deep_sea(spec.n, env_seed);
  if (spec.name == "random") {
    return make_random_mdp(spec.num_states, spec.num_actions, spec.horizon,
                           env_seed);
  }
  throw std::invalid_argument("unknown environment '" + spec.name + "'");
}

}  // namespace narl
