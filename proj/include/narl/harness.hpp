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
#include <optional>
#include <string>
#include <vector>

#include "narl/agents.hpp"
#include "narl/envs.hpp"

namespace narl {

inline constexpr const char* kVersion = "0.3.0";

struct AgentSpec {
  std::string label;  // algorithm name unless several configs share one
  AgentConfig config;
};

struct ExperimentSpec {
  EnvSpec env;
  std::vector<AgentSpec> agents;
  std::size_t episodes = 2000;
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "results";
  double solve_threshold = 0.99;
  std::size_t solve_window = 10;
  // Stop a run once it meets the solve rule (used by size sweeps).
  bool stop_when_solved = false;
  std::size_t workers = 1;

  void validate() const;
};

struct EpisodeRow {
  std::size_t episode;  // 1-based
  double realized_return;
  double policy_value;      // V(pi_k) on the true MDP
  double optimistic_value;  // V~_k(pi_k) = <P0, V~^0>
  double cum_regret;
  double wall_time = 0.0;   // seconds spent on this episode; not persisted
};

struct RunRecord {
  std::string algo;
  std::string env;
  std::uint64_t seed = 0;
  double optimal_value = 0.0;
  std::vector<EpisodeRow> rows;
};

struct SolveRule {
  double threshold = 0.99;
  std::size_t window = 10;
};

// First episode k whose trailing `window` realized returns average at least
// threshold * optimal_value; nullopt when that never happens.
std::optional<std::size_t> episodes_to_solve(const RunRecord& record,
                                             double optimal_value,
                                             double threshold,
                                             std::size_t window);

// Seed used to build the environment of one run (Deep Sea maps, random MDPs).
std::uint64_t environment_seed(const EnvSpec& env, std::uint64_t run_seed);

// One (agent, seed) pair: fresh environment and agent, K episodes.
RunRecord run_single(const EnvSpec& env, const AgentSpec& agent,
                     std::uint64_t seed, std::size_t episodes,
                     std::optional<SolveRule> stop_rule = std::nullopt);

// Every (agent, seed) pair, ordered agent-major then by seed position. Runs
// are spread over spec.workers threads; the output does not depend on it.
std::vector<RunRecord> run_experiment(const ExperimentSpec& spec);

struct Band {
  std::vector<double> median;
  std::vector<double> q25;
  std::vector<double> q75;
};

struct AlgorithmSummary {
  std::string algo;
  std::string env;
  std::size_t runs = 0;
  Band cum_regret;
  Band episode_return;
  // (seed, episodes-to-solve), sorted by seed.
  std::vector<std::pair<std::uint64_t, std::optional<std::size_t>>> solve_episodes;
  // Unsolved runs rank above every solved one; nullopt if the median is one.
  std::optional<double> median_solve_episode;
};

struct Summary {
  std::vector<AlgorithmSummary> algorithms;
};

// Linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double q);

// Median of episodes-to-solve where unsolved counts as +infinity.
std::optional<double> median_solve(
    const std::vector<std::optional<std::size_t>>& episodes);

// Per-episode across-seed median and IQR, per algorithm label.
Summary summarize(const std::vector<RunRecord>& records, const SolveRule& rule);

}  // namespace narl
