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

#include "narl/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace narl {

void ExperimentSpec::validate() const {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (agents.empty()) throw std::invalid_argument("at least one algorithm is required");
  if (!(solve_threshold > 0.0 && solve_threshold <= 1.0)) {
    throw std::invalid_argument("solve_threshold must lie in (0,1]");
  }
  if (solve_window < 1) throw std::invalid_argument("solve_window must be >= 1");
  for (const AgentSpec& agent : agents) agent.config.validate();
}

std::optional<std::size_t> episodes_to_solve(const RunRecord& record,
                                             double optimal_value,
                                             double threshold,
                                             std::size_t window) {
  if (window == 0) return std::nullopt;
  const auto& rows = record.rows;
  double trailing = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    trailing += rows[i].realized_return;
    if (i >= window) trailing -= rows[i - window].realized_return;
    if (i + 1 >= window &&
        trailing / static_cast<double>(window) >= threshold * optimal_value) {
      return rows[i].episode;
    }
  }
  return std::nullopt;
}

std::uint64_t environment_seed(const EnvSpec& env, std::uint64_t run_seed) {
  return derive_seed(env.seed, {run_seed});
}

RunRecord run_single(const EnvSpec& env_spec, const AgentSpec& agent_spec,
                     std::uint64_t seed, std::size_t episodes,
                     std::optional<SolveRule> stop_rule) {
  const FiniteMdp env = make_env(env_spec, environment_seed(env_spec, seed));
  const double optimal_value =
      dot(env.initial_dist(), exact_value_iteration(env).values.stage(0));
  const std::uint64_t agent_seed = derive_seed(
      seed, {static_cast<std::uint64_t>(agent_spec.config.algorithm) + 1});
  Agent agent(agent_spec.config, env.num_states(), env.num_actions(),
              env.horizon(), episodes, agent_seed);

  RunRecord record{agent_spec.label, env_spec.label(), seed, optimal_value, {}};
  record.rows.reserve(episodes);
  double regret = 0.0;
  for (std::size_t k = 1; k <= episodes; ++k) {
    const auto start = std::chrono::steady_clock::now();
    const EpisodeOutcome outcome = agent.episode_step(env, k);
    const double policy_value = evaluate_policy(env, outcome.plan.policy).value;
    regret += optimal_value - policy_value;
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    record.rows.push_back({k, outcome.trajectory.total_reward(), policy_value,
                           outcome.plan.start_value(env.initial_dist()), regret,
                           elapsed.count()});
    if (stop_rule && episodes_to_solve(record, optimal_value, stop_rule->threshold,
                                       stop_rule->window)) {
      break;
    }
  }
  return record;
}

std::vector<RunRecord> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t jobs = spec.agents.size() * spec.seeds.size();
  std::vector<RunRecord> records(jobs);
  std::optional<SolveRule> stop_rule;
  if (spec.stop_when_solved) {
    stop_rule = SolveRule{spec.solve_threshold, spec.solve_window};
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      try {
        const AgentSpec& agent = spec.agents[job / spec.seeds.size()];
        const std::uint64_t seed = spec.seeds[job % spec.seeds.size()];
        records[job] = run_single(spec.env, agent, seed, spec.episodes, stop_rule);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.workers, 1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::optional<double> median_solve(
    const std::vector<std::optional<std::size_t>>& episodes) {
  if (episodes.empty()) return std::nullopt;
  std::vector<double> values;
  for (const auto& e : episodes) {
    values.push_back(e ? static_cast<double>(*e)
                       : std::numeric_limits<double>::infinity());
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double median =
      n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  if (!std::isfinite(median)) return std::nullopt;
  return median;
}

Summary summarize(const std::vector<RunRecord>& records, const SolveRule& rule) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    if (!groups.count(r.algo)) order.push_back(r.algo);
    groups[r.algo].push_back(&r);
  }
  Summary summary;
  for (const std::string& algo : order) {
    auto& runs = groups[algo];
    std::sort(runs.begin(), runs.end(), [](const RunRecord* a, const RunRecord* b) {
      return a->seed < b->seed;
    });
    AlgorithmSummary s;
    s.algo = algo;
    s.env = runs.front()->env;
    s.runs = runs.size();
    std::size_t length = 0;
    for (const RunRecord* r : runs) length = std::max(length, r->rows.size());
    for (std::size_t i = 0; i < length; ++i) {
      std::vector<double> regret, ret;
      for (const RunRecord* r : runs) {
        if (i < r->rows.size()) {
          regret.push_back(r->rows[i].cum_regret);
          ret.push_back(r->rows[i].realized_return);
        }
      }
      s.cum_regret.median.push_back(quantile(regret, 0.5));
      s.cum_regret.q25.push_back(quantile(regret, 0.25));
      s.cum_regret.q75.push_back(quantile(regret, 0.75));
      s.episode_return.median.push_back(quantile(ret, 0.5));
      s.episode_return.q25.push_back(quantile(ret, 0.25));
      s.episode_return.q75.push_back(quantile(ret, 0.75));
    }
    std::vector<std::optional<std::size_t>> solved;
    for (const RunRecord* r : runs) {
      solved.push_back(episodes_to_solve(*r, r->optimal_value, rule.threshold, rule.window));
      s.solve_episodes.emplace_back(r->seed, solved.back());
    }
    s.median_solve_episode = median_solve(solved);
    summary.algorithms.push_back(std::move(s));
  }
  return summary;
}

}  // namespace narl
