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

#include "narl/planners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace narl {
namespace {

PlanResult make_result(std::size_t S, std::size_t A, std::size_t H) {
  return PlanResult{ValueTable(H, S, A), Policy(H, S),
                    std::vector<double>(S * A, 0.0),
                    std::vector<double>(S * A * S, 0.0)};
}

// Fills v[h] and the greedy policy at stage h from q[h].
void greedy_stage(PlanResult& out, std::size_t h) {
  const std::size_t S = out.values.num_states(), A = out.values.num_actions();
  for (std::size_t s = 0; s < S; ++s) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < A; ++a) {
      if (out.values.q(h, s, a) > out.values.q(h, s, best)) best = a;
    }
    out.policy.at(h, s) = best;
    out.values.v(h, s) = out.values.q(h, s, best);
  }
}

void check_model(const EmpiricalModel& model) {
  const std::size_t SA = model.num_states * model.num_actions;
  if (model.r_hat.size() != SA || model.p_hat.size() != SA * model.num_states) {
    throw std::invalid_argument("planner: malformed empirical model");
  }
}

void set_row(std::vector<double>& table, std::size_t sa, std::size_t S,
             std::span<const double> row) {
  std::copy(row.begin(), row.end(), table.begin() + sa * S);
}

}  // namespace

double PlanResult::start_value(std::span<const double> initial_dist) const {
  return dot(initial_dist, values.stage(0));
}

PlanResult plan_on_model(const EmpiricalModel& model, std::size_t horizon) {
  check_model(model);
  const std::size_t S = model.num_states, A = model.num_actions;
  PlanResult out = make_result(S, A, horizon);
  out.chosen_reward = model.r_hat;
  out.chosen_dynamics = model.p_hat;
  for (std::size_t h = horizon; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        out.values.q(h, s, a) = model.r_hat[s * A + a] + dot(model.row(s, a), next);
      }
    }
    greedy_stage(out, h);
  }
  return out;
}

PlanResult naevi(const EmpiricalModel& model, const NoiseEnsemble& ensemble,
                 std::size_t horizon) {
  check_model(model);
  const std::size_t S = model.num_states, A = model.num_actions;
  if (ensemble.num_states() != S || ensemble.num_actions() != A ||
      ensemble.m_r() == 0) {
    throw std::invalid_argument("naevi: noise ensemble does not match the model");
  }
  PlanResult out = make_result(S, A, horizon);

  // The reward bonus does not depend on the stage.
  std::vector<double> reward_term(S * A);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      double best = ensemble.reward(s, a, 0);
      for (std::size_t m = 1; m < ensemble.m_r(); ++m) {
        best = std::max(best, ensemble.reward(s, a, m));
      }
      reward_term[s * A + a] = clip_reward(model.r_hat[s * A + a] + best);
    }
  }
  out.chosen_reward = reward_term;
  out.chosen_dynamics = model.p_hat;

  for (std::size_t h = horizon; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        double future = dot(model.row(s, a), next);
        if (ensemble.has_dynamics()) {
          std::size_t best_m = 0;
          double best = dot(ensemble.dynamics(s, a, 0), next);
          for (std::size_t m = 1; m < ensemble.m_p(); ++m) {
            const double x = dot(ensemble.dynamics(s, a, m), next);
            if (x > best) {
              best = x;
              best_m = m;
            }
          }
          future += best;
          if (h == 0) {
            const auto xi = ensemble.dynamics(s, a, best_m);
            const auto p = model.row(s, a);
            for (std::size_t j = 0; j < S; ++j) {
              out.chosen_dynamics[(s * A + a) * S + j] = p[j] + xi[j];
            }
          }
        }
        out.values.q(h, s, a) = reward_term[s * A + a] + future;
      }
    }
    greedy_stage(out, h);
  }
  return out;
}

PlanResult navi(const RewardSampleTable& reward_samples,
                const EmpiricalModel& model, std::size_t horizon,
                const ValueTable* prev_q) {
  check_model(model);
  const std::size_t S = model.num_states, A = model.num_actions;
  if (reward_samples.num_states != S || reward_samples.num_actions != A ||
      reward_samples.num_samples == 0 ||
      reward_samples.values.size() != S * A * reward_samples.num_samples) {
    throw std::invalid_argument("navi: reward samples do not match the model");
  }
  if (prev_q != nullptr &&
      (prev_q->horizon() != horizon || prev_q->num_states() != S ||
       prev_q->num_actions() != A)) {
    throw std::invalid_argument("navi: previous Q table has the wrong shape");
  }
  PlanResult out = make_result(S, A, horizon);
  out.chosen_dynamics = model.p_hat;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      double best = reward_samples.at(s, a, 0);
      for (std::size_t m = 1; m < reward_samples.num_samples; ++m) {
        best = std::max(best, reward_samples.at(s, a, m));
      }
      out.chosen_reward[s * A + a] = best;
    }
  }
  const double cap = static_cast<double>(horizon);
  for (std::size_t h = horizon; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        double q = out.chosen_reward[s * A + a] + dot(model.row(s, a), next);
        q = std::min(q, cap);
        if (prev_q != nullptr) q = std::min(q, prev_q->q(h, s, a));
        out.values.q(h, s, a) = q;
      }
    }
    greedy_stage(out, h);
  }
  return out;
}

std::vector<double> optimistic_transition(std::span<const double> p_hat,
                                          double radius,
                                          std::span<const double> v) {
  const std::size_t S = p_hat.size();
  if (v.size() != S) {
    throw std::invalid_argument("optimistic_transition: size mismatch");
  }
  std::vector<double> p(p_hat.begin(), p_hat.end());
  if (S == 0 || radius <= 0.0) return p;
  std::vector<std::size_t> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  const std::size_t best = order.front();
  p[best] = std::min(1.0, p_hat[best] + radius / 2.0);
  double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (std::size_t i = S; i-- > 1 && total > 1.0;) {
    const std::size_t worst = order[i];
    const double removable = std::min(p[worst], total - 1.0);
    p[worst] -= removable;
    total -= removable;
  }
  return p;
}

PlanResult evi_ucrl2(const EmpiricalModel& model,
                     std::span<const double> beta_r_table,
                     std::span<const double> beta_p_table,
                     std::size_t horizon) {
  check_model(model);
  const std::size_t S = model.num_states, A = model.num_actions;
  if (beta_r_table.size() != S * A || beta_p_table.size() != S * A) {
    throw std::invalid_argument("evi_ucrl2: radius tables have the wrong size");
  }
  PlanResult out = make_result(S, A, horizon);
  for (std::size_t sa = 0; sa < S * A; ++sa) {
    out.chosen_reward[sa] = model.r_hat[sa] + beta_r_table[sa];
  }
  for (std::size_t h = horizon; h-- > 0;) {
    const auto next = out.values.stage(h + 1);
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t sa = s * A + a;
        const auto p = optimistic_transition(model.row(s, a), beta_p_table[sa], next);
        out.values.q(h, s, a) = out.chosen_reward[sa] + dot(p, next);
        if (h == 0) set_row(out.chosen_dynamics, sa, S, p);
      }
    }
    greedy_stage(out, h);
  }
  return out;
}

PlanResult psrl_plan(const DataBuffer& buffer, const PsrlPrior& prior,
                     std::size_t horizon, Rng& rng) {
  const std::size_t S = buffer.num_states(), A = buffer.num_actions();
  const double alpha0 = prior.alpha0 > 0.0 ? prior.alpha0 : 1.0 / static_cast<double>(S);
  EmpiricalModel sampled{S, A, std::vector<double>(S * A),
                         std::vector<double>(S * A * S)};
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::size_t sa = s * A + a;
      double total = 0.0;
      for (std::size_t j = 0; j < S; ++j) {
        const double shape = alpha0 + static_cast<double>(buffer.transitions(s, a, j));
        const double g = std::gamma_distribution<double>(shape, 1.0)(rng);
        sampled.p_hat[sa * S + j] = g;
        total += g;
      }
      if (total > 0.0) {
        for (std::size_t j = 0; j < S; ++j) sampled.p_hat[sa * S + j] /= total;
      } else {
        // Every gamma draw underflowed: put the mass on one uniform index.
        const std::size_t j = std::uniform_int_distribution<std::size_t>(0, S - 1)(rng);
        sampled.p_hat[sa * S + j] = 1.0;
      }
      const double n = static_cast<double>(buffer.visits(s, a));
      const double precision =
          1.0 / prior.reward_variance + n / prior.observation_variance;
      const double mean = (prior.reward_mean / prior.reward_variance +
                           buffer.reward_sum(s, a) / prior.observation_variance) /
                          precision;
      sampled.r_hat[sa] =
          clip_reward(mean + normal(rng) / std::sqrt(precision));
    }
  }
  return plan_on_model(sampled, horizon);
}

}  // namespace narl
