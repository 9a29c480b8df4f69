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

#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "narl/agents.hpp"
#include "narl/envs.hpp"

using namespace narl;

namespace {

AgentConfig config_for(Algorithm algorithm) {
  AgentConfig c;
  c.algorithm = algorithm;
  c.noise.mode = default_noise_mode(algorithm);
  return c;
}

const Algorithm kAll[] = {
    Algorithm::kNarlUcrlGaussian, Algorithm::kNarlUcbviGaussian,
    Algorithm::kNarlUcbviBootstrapFake, Algorithm::kNarlEnsembleBootstrap,
    Algorithm::kUcrl2, Algorithm::kPsrl, Algorithm::kOracle};

}  // namespace

TEST_SUITE("agents") {

TEST_CASE("algorithm names round trip") {
  for (Algorithm a : kAll) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK(to_string(Algorithm::kNarlEnsembleBootstrap) == "narl-ensemble-bootstrap");
  CHECK(to_string(Algorithm::kUcrl2) == "ucrl2");
  CHECK_THROWS_AS(parse_algorithm("dqn"), std::invalid_argument);
}

TEST_CASE("noise mode must fit the algorithm") {
  AgentConfig c = config_for(Algorithm::kNarlUcrlGaussian);
  c.noise.mode = NoiseMode::kEnsembleBootstrap;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.noise.mode = NoiseMode::kGaussianTheoryUcbvi;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config_for(Algorithm::kNarlUcbviBootstrapFake);
  c.noise.mode = NoiseMode::kGaussianPractical;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = config_for(Algorithm::kUcrl2);
  c.noise.mode = NoiseMode::kEnsembleBootstrap;
  CHECK_NOTHROW(c.validate());
  c.delta = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  for (Algorithm a : kAll) CHECK_NOTHROW(config_for(a).validate());
}

TEST_CASE("every agent runs and keeps its invariants") {
  const FiniteMdp env = make_riverswim(4, 6);
  for (Algorithm a : kAll) {
    Agent agent(config_for(a), 4, 2, 6, 50, 3);
    for (std::size_t k = 1; k <= 30; ++k) {
      const EpisodeOutcome out = agent.episode_step(env, k);
      CHECK(out.trajectory.steps.size() == 6);
      CHECK(out.plan.policy.horizon() == 6);
    }
    CHECK(agent.buffer().total_visits() == 180);
  }
  Agent agent(config_for(Algorithm::kPsrl), 4, 2, 6, 50, 3);
  CHECK_THROWS_AS(agent.plan(make_riverswim(5, 6), 1), std::invalid_argument);
  CHECK_THROWS_AS(agent.plan(make_riverswim(4, 7), 1), std::invalid_argument);
}

TEST_CASE("first NAVI episode: zero estimates, unit noise, a valid policy") {
  const FiniteMdp env = make_chain(3, 4);
  Agent agent(config_for(Algorithm::kNarlUcbviGaussian), 3, 2, 4, 10, 8);
  CHECK_FALSE(agent.noise().uses_dynamics_noise());
  const NoiseEnsemble e = sample_noise_ensemble(agent.buffer(), agent.noise(),
                                                agent.confidence(), 8, 1);
  const PlanResult p = agent.plan(env, 1);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < 2; ++a) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < e.m_r(); ++m) best = std::max(best, e.reward(s, a, m));
      CHECK(p.chosen_reward[s * 2 + a] == doctest::Approx(best));
    }
  for (std::size_t h = 0; h < 4; ++h)
    for (std::size_t s = 0; s < 3; ++s) CHECK(p.policy.at(h, s) < 2);
}

TEST_CASE("UCRL2 first episode takes the largest value the radii allow") {
  const FiniteMdp env = make_riverswim(6, 20);
  Agent agent(config_for(Algorithm::kUcrl2), 6, 2, 20, 100, 1);
  // Every pair is unvisited: beta_P(1) > 2 covers the simplex, so each step
  // earns beta_r(1, delta').
  const double expected = 20 * beta_r(1, agent.confidence().delta_prime);
  CHECK(agent.plan(env, 1).start_value(env.initial_dist()) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("agents are reproducible per seed") {
  const FiniteMdp env = make_riverswim(6, 20);
  for (Algorithm a : kAll) {
    Agent x(config_for(a), 6, 2, 20, 100, 42), y(config_for(a), 6, 2, 20, 100, 42);
    for (std::size_t k = 1; k <= 100; ++k) {
      const EpisodeOutcome ox = x.episode_step(env, k);
      const EpisodeOutcome oy = y.episode_step(env, k);
      CHECK(ox.plan.policy == oy.plan.policy);
      CHECK(ox.trajectory == oy.trajectory);
    }
  }
}

TEST_CASE("fake-sample agent keeps the ratio and the default M_B") {
  const FiniteMdp env = make_chain(4, 5);
  Agent agent(config_for(Algorithm::kNarlUcbviBootstrapFake), 4, 2, 5, 40, 2);
  CHECK(agent.fake_samples_per_sign() == default_fake_samples(5, 200));
  for (std::size_t k = 1; k <= 40; ++k) agent.episode_step(env, k);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t a = 0; a < 2; ++a) {
      const RewardSamples& r = agent.buffer().rewards(s, a);
      CHECK(r.fake_count == 2 * agent.fake_samples_per_sign() * r.real_count);
    }
  AgentConfig fixed = config_for(Algorithm::kNarlUcbviBootstrapFake);
  fixed.noise.m_b = 3;
  CHECK(Agent(fixed, 4, 2, 5, 40, 2).fake_samples_per_sign() == 3);
}

TEST_CASE("automatic ensemble sizes and epsilon-derived delta") {
  AgentConfig c = config_for(Algorithm::kNarlUcrlGaussian);
  c.noise.mode = NoiseMode::kGaussianTheoryUcrl;
  c.auto_ensemble_sizes = true;
  c.delta = 0.05;
  Agent a(c, 4, 2, 5, 100, 1);
  const EnsembleSizes e = min_ensemble_sizes(4, 2, 5, 0.05);
  CHECK(a.noise().m_r == e.m_r);
  CHECK(a.noise().m_p == e.m_p);
  c.epsilon = 0.1;
  Agent b(c, 4, 2, 5, 100, 1);
  CHECK(b.confidence().delta == doctest::Approx(0.1 / (4.0 * 500)));
}

TEST_CASE("NAVI agent values never increase across episodes") {
  const FiniteMdp env = make_chain(4, 6);
  Agent agent(config_for(Algorithm::kNarlUcbviGaussian), 4, 2, 6, 50, 5);
  ValueTable prev;
  for (std::size_t k = 1; k <= 50; ++k) {
    const PlanResult p = agent.episode_step(env, k).plan;
    for (double q : p.values.q_table()) CHECK(q <= 6.0);
    if (k > 1)
      for (std::size_t i = 0; i < prev.q_table().size(); ++i)
        CHECK(p.values.q_table()[i] <= prev.q_table()[i]);
    prev = p.values;
  }
}

TEST_CASE("ensemble backup: single view, no filter, fallback") {
  const FiniteMdp env = make_random_mdp(3, 2, 4, 6);
  const EmpiricalModel one = [&] {
    DataBuffer b(3, 2);
    Rng rng(1);
    for (int k = 0; k < 20; ++k) update(b, simulate_episode(env, Policy(4, 3, k % 2), rng));
    return empirical_model(b);
  }();
  const std::vector<EmpiricalModel> single = {one};
  const PlanResult p = narl_ensemble_bootstrap_plan(single, 4, std::nullopt);
  const PlanResult q = plan_on_model(one, 4);
  CHECK(p.values.v_table() == q.values.v_table());
  CHECK(p.policy == q.policy);

  std::vector<EmpiricalModel> pair = {EmpiricalModel{1, 1, {0.2}, {1.0}},
                                      EmpiricalModel{1, 1, {0.8}, {1.0}}};
  CHECK(narl_ensemble_bootstrap_plan(pair, 1, std::nullopt).values.v(0, 0) == doctest::Approx(0.8));
  CHECK(narl_ensemble_bootstrap_plan(pair, 1, std::numeric_limits<double>::infinity())
            .values.v(0, 0) == doctest::Approx(0.8));
  // Neither view lies within 0.1 of the mean 0.5; both are 0.3 away and the
  // lower index wins.
  CHECK(narl_ensemble_bootstrap_plan(pair, 1, 0.1).values.v(0, 0) == doctest::Approx(0.2));
  pair.push_back(EmpiricalModel{1, 1, {0.45}, {1.0}});
  // Mean 0.4833: 0.45 is admissible at 0.1 and is the only one.
  CHECK(narl_ensemble_bootstrap_plan(pair, 1, 0.1).values.v(0, 0) == doctest::Approx(0.45));
  CHECK_THROWS_AS(narl_ensemble_bootstrap_plan({}, 1, std::nullopt), std::invalid_argument);
}

TEST_CASE("infinite radius filter reproduces the unfiltered agent") {
  const FiniteMdp env = make_riverswim(6, 20);
  AgentConfig plain = config_for(Algorithm::kNarlEnsembleBootstrap);
  AgentConfig wide = plain;
  wide.radius_filter = std::numeric_limits<double>::infinity();
  Agent a(plain, 6, 2, 20, 100, 9), b(wide, 6, 2, 20, 100, 9);
  for (std::size_t k = 1; k <= 100; ++k)
    CHECK(a.episode_step(env, k).plan.policy == b.episode_step(env, k).plan.policy);
}

TEST_CASE("optimism decomposition") {
  const FiniteMdp env = make_riverswim(6, 20);
  Agent oracle(config_for(Algorithm::kOracle), 6, 2, 20, 10, 1);
  const OptimismGap zero = optimism_gap(oracle.plan(env, 1), env);
  CHECK(std::abs(zero.optimism) < 1e-12);
  CHECK(std::abs(zero.estimation_error) < 1e-12);

  const double v_star = exact_value_iteration(env).values.v(0, 0);
  Agent ucrl(config_for(Algorithm::kUcrl2), 6, 2, 20, 100, 4);
  std::size_t overestimates = 0;
  for (std::size_t k = 1; k <= 100; ++k) {
    const PlanResult p = ucrl.episode_step(env, k).plan;
    const OptimismGap g = optimism_gap(p, env, v_star);
    const double regret = v_star - evaluate_policy(env, p.policy).value;
    CHECK(std::abs(g.optimism + g.estimation_error - regret) < 1e-9);
    overestimates += g.optimism <= 0.0;
  }
  CHECK(overestimates >= 90);
}

}  // TEST_SUITE
