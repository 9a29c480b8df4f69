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
#include <string>
#include <vector>

namespace narl {

// Monte Carlo estimate of a probability.
struct Frequency {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

// Upper tail P(Z > x) of the standard normal, via erfc.
double normal_upper_tail(double x);

// Fraction of draws xi ~ N(0, (2 beta)^2) with xi >= beta, the worst case of
// the concentration event (true reward = r_hat + beta).
Frequency reward_anticoncentration(std::size_t trials, std::uint64_t seed);

// Fraction of trials where the maximum of m such draws clears beta.
Frequency max_boost(std::size_t m, std::size_t trials, std::uint64_t seed);

struct DynamicsTrial {
  Frequency frequency;
  std::size_t rejected = 0;  // trials discarded because the event failed
};

// For a random true row P, a fixed random v, and p_hat drawn from n_samples
// transitions (kept only when ||P - p_hat||_1 <= beta_P), the fraction of
// noise draws with <p_hat + xi, v> >= <P, v>. When adversarial is set, p_hat
// is instead the point of the L1 ball minimizing <p_hat, v>.
DynamicsTrial dynamics_anticoncentration(std::size_t num_states,
                                         std::size_t trials, double delta,
                                         std::size_t n_samples,
                                         bool adversarial, std::uint64_t seed);

// Multiplier L of the reward estimation-error bound as printed, and the
// value forced by the Gaussian tail bound P(|Z| >= t) <= 2 exp(-t^2/2).
double estimation_multiplier_printed(std::size_t num_states,
                                     std::size_t num_actions, std::size_t m_r,
                                     double delta);
double estimation_multiplier_forced(std::size_t num_states,
                                    std::size_t num_actions, std::size_t m_r,
                                    double delta);

// Fraction of trials with |r~ - r| > multiplier * beta under the event, where
// r~ is the max of m_r draws around r_hat in [r - beta, r + beta].
Frequency reward_estimation_excess(std::size_t m_r, double multiplier,
                                   std::size_t trials, std::uint64_t seed);

// Fraction of fake samples after random update sequences that deviate from
// the 2 M_B ratio; returns the number of violations.
std::size_t fake_ratio_violations(std::size_t sequences, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
  // Reported but excluded from the pass/fail verdict.
  bool informational = false;
};

// The Monte Carlo check suite behind `narl verify`.
std::vector<CheckResult> run_check_suite(std::size_t trials,
                                         std::uint64_t seed);

}  // namespace narl
