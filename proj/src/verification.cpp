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

#include "narl/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "narl/noise.hpp"
#include "narl/planners.hpp"
#include "narl/rng.hpp"
#include "narl/stats.hpp"

namespace narl {
namespace {

Frequency make_frequency(std::size_t hits, std::size_t trials) {
  Frequency f;
  f.trials = trials;
  if (trials == 0) return f;
  f.value = static_cast<double>(hits) / static_cast<double>(trials);
  f.std_error = std::sqrt(f.value * (1.0 - f.value) / static_cast<double>(trials));
  return f;
}

std::string format(const char* fmt, double a, double b, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c);
  return buf;
}

// A representative radius; every check below is scale free in beta.
double reference_beta() { return beta_r(50, 0.1 / 24.0); }

}  // namespace

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

Frequency reward_anticoncentration(std::size_t trials, std::uint64_t seed) {
  return max_boost(1, trials, seed);
}

Frequency max_boost(std::size_t m, std::size_t trials, std::uint64_t seed) {
  const double beta = reference_beta();
  Rng rng = make_stream(seed, Stream::kVerification, {1, m});
  std::normal_distribution<double> noise(0.0, 2.0 * beta);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    double best = noise(rng);
    for (std::size_t j = 1; j < m; ++j) best = std::max(best, noise(rng));
    if (best >= beta) ++hits;
  }
  return make_frequency(hits, trials);
}

DynamicsTrial dynamics_anticoncentration(std::size_t num_states,
                                         std::size_t trials, double delta,
                                         std::size_t n_samples,
                                         bool adversarial, std::uint64_t seed) {
  const std::size_t S = num_states;
  constexpr std::size_t kActions = 2;
  Rng setup = make_stream(seed, Stream::kVerification, {2, S});
  std::exponential_distribution<double> gamma1(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> P(S), v(S);
  double total = 0.0;
  for (double& x : P) total += (x = gamma1(setup));
  for (double& x : P) x /= total;
  for (double& x : v) x = unit(setup);
  const double target = dot(P, v);

  const double event_delta = delta / static_cast<double>(S * kActions);
  const double radius = beta_p(n_samples, event_delta, S);
  const double sigma = 2.0 * radius;

  Rng rng = make_stream(seed, Stream::kVerification, {3, S, adversarial ? 1u : 0u});
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> p_hat(S);
  std::vector<double> neg_v(S);
  for (std::size_t j = 0; j < S; ++j) neg_v[j] = -v[j];
  const std::vector<double> worst = optimistic_transition(P, radius, neg_v);

  DynamicsTrial out;
  std::size_t hits = 0, kept = 0;
  while (kept < trials) {
    if (adversarial) {
      p_hat = worst;
    } else {
      std::fill(p_hat.begin(), p_hat.end(), 0.0);
      for (std::size_t i = 0; i < n_samples; ++i) {
        p_hat[sample_categorical(P, rng)] += 1.0 / static_cast<double>(n_samples);
      }
      double l1 = 0.0;
      for (std::size_t j = 0; j < S; ++j) l1 += std::abs(P[j] - p_hat[j]);
      if (l1 > radius) {
        ++out.rejected;
        continue;
      }
    }
    double value = 0.0;
    for (std::size_t j = 0; j < S; ++j) {
      value += (p_hat[j] + sigma * normal(rng)) * v[j];
    }
    if (value >= target) ++hits;
    ++kept;
  }
  out.frequency = make_frequency(hits, kept);
  return out;
}

double estimation_multiplier_printed(std::size_t num_states,
                                     std::size_t num_actions, std::size_t m_r,
                                     double delta) {
  const double x = 4.0 * static_cast<double>(num_states * num_actions * m_r) / delta;
  return 2.0 * std::sqrt(std::log(x)) + 1.0;
}

double estimation_multiplier_forced(std::size_t num_states,
                                    std::size_t num_actions, std::size_t m_r,
                                    double delta) {
  const double x = 2.0 * static_cast<double>(num_states * num_actions * m_r) / delta;
  return 2.0 * std::sqrt(2.0 * std::log(x)) + 1.0;
}

Frequency reward_estimation_excess(std::size_t m_r, double multiplier,
                                   std::size_t trials, std::uint64_t seed) {
  const double beta = reference_beta();
  Rng rng = make_stream(seed, Stream::kVerification, {4, m_r});
  std::normal_distribution<double> noise(0.0, 2.0 * beta);
  std::uniform_real_distribution<double> offset(-beta, beta);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double r = 0.5;
    const double r_hat = r + offset(rng);
    double best = noise(rng);
    for (std::size_t m = 1; m < m_r; ++m) best = std::max(best, noise(rng));
    if (std::abs(r_hat + best - r) > multiplier * beta) ++hits;
  }
  return make_frequency(hits, trials);
}

std::size_t fake_ratio_violations(std::size_t sequences, std::uint64_t seed) {
  Rng rng = make_stream(seed, Stream::kVerification, {5});
  std::size_t violations = 0;
  for (std::size_t i = 0; i < sequences; ++i) {
    const std::size_t S = 1 + rng() % 5, A = 1 + rng() % 3, m_b = rng() % 7;
    DataBuffer buffer(S, A);
    const std::size_t updates = rng() % 200;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t u = 0; u < updates; ++u) {
      const std::size_t s = rng() % S, a = rng() % A;
      buffer.record(s, a, unit(rng), rng() % S);
      inject_fake_samples(buffer, s, a, m_b);
    }
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        const RewardSamples& r = buffer.rewards(s, a);
        if (r.real_count != buffer.visits(s, a) ||
            r.fake_count != 2 * m_b * r.real_count) {
          ++violations;
        }
      }
    }
  }
  return violations;
}

std::vector<CheckResult> run_check_suite(std::size_t trials,
                                         std::uint64_t seed) {
  std::vector<CheckResult> out;
  const double se_half = std::sqrt(0.25 / static_cast<double>(trials));

  {
    Rng rng = make_stream(seed, Stream::kVerification, {10});
    std::uniform_real_distribution<double> unit(0.01, 5.0);
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      const double t = unit(rng), sigma = unit(rng);
      if (gaussian_tail_lower_bound(t, sigma) > normal_upper_tail(t / sigma)) ok = false;
    }
    const double at_sigma = gaussian_tail_lower_bound(1.0, 1.0);
    ok = ok && std::abs(at_sigma - 0.12098) <= 1e-5;
    out.push_back({"gaussian tail lower bound", ok,
                   format("bound(t=sigma)=%.6f target=%.5f", at_sigma, 0.12098)});
  }

  const Frequency p = reward_anticoncentration(trials, seed);
  {
    const double exact = normal_upper_tail(0.5);
    const bool ok = p.value >= 0.1 - 3.0 * se_half &&
                    std::abs(p.value - exact) <= 4.0 * p.std_error;
    out.push_back({"reward anticoncentration (sigma = 2 beta)", ok,
                   format("freq=%.5f exact=%.5f floor=%.2f", p.value, exact, 0.1)});
  }

  for (std::size_t m : {1u, 4u, 10u}) {
    const Frequency boosted = max_boost(m, trials, seed + 1);
    const double predicted = 1.0 - std::pow(1.0 - p.value, static_cast<double>(m));
    const double slope = static_cast<double>(m) * std::pow(1.0 - p.value, m - 1.0);
    const double se = std::hypot(boosted.std_error, slope * p.std_error);
    const bool ok = std::abs(boosted.value - predicted) <= 3.0 * se;
    out.push_back({"max-boost M=" + std::to_string(m), ok,
                   format("freq=%.5f predicted=%.5f sigma=%.5f", boosted.value,
                          predicted, se)});
  }

  for (std::size_t S : {2u, 4u, 8u}) {
    for (bool adversarial : {false, true}) {
      const DynamicsTrial d = dynamics_anticoncentration(S, trials, 0.05, 20,
                                                         adversarial, seed);
      const double floor = 1.0 / (9.0 * static_cast<double>(S));
      const bool ok = d.frequency.value >= floor - 3.0 * d.frequency.std_error;
      out.push_back({"dynamics anticoncentration |S|=" + std::to_string(S) +
                         (adversarial ? " (adversarial p_hat)" : " (sampled p_hat)"),
                     ok,
                     format("freq=%.5f floor=%.5f rejected=%.0f", d.frequency.value,
                            floor, static_cast<double>(d.rejected))});
    }
  }

  {
    constexpr std::size_t S = 6, A = 2, M = 10;
    constexpr double delta = 0.1;
    const double bound = delta / (S * A);
    const double forced = estimation_multiplier_forced(S, A, M, delta);
    const Frequency f = reward_estimation_excess(M, forced, trials, seed);
    out.push_back({"reward estimation control", f.value <= bound + 3.0 * f.std_error,
                   format("freq=%.5f bound=%.5f L=%.3f", f.value, bound, forced)});
    const double printed = estimation_multiplier_printed(S, A, M, delta);
    const Frequency g = reward_estimation_excess(M, printed, trials, seed);
    out.push_back({"reward estimation control, printed multiplier", true,
                   format("freq=%.5f bound=%.5f L=%.3f", g.value, bound, printed),
                   /*informational=*/true});
  }

  {
    const std::size_t violations = fake_ratio_violations(200, seed);
    out.push_back({"fake:real ratio 2 M_B", violations == 0,
                   std::to_string(violations) + " violations"});
  }
  return out;
}

}  // namespace narl
