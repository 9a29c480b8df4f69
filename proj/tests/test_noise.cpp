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
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "narl/noise.hpp"
#include "narl/verification.hpp"

using namespace narl;

namespace {

NoiseConfig gaussian(NoiseMode mode) {
  NoiseConfig c;
  c.mode = mode;
  return c;
}

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("noise scales per mode") {
  const auto conf = ConfidenceConfig::from_delta(0.1, 6, 2, 100, 20);
  const auto ucrl = gaussian(NoiseMode::kGaussianTheoryUcrl);
  const auto ucbvi = gaussian(NoiseMode::kGaussianTheoryUcbvi);
  auto practical = gaussian(NoiseMode::kGaussianPractical);
  practical.c = 0.5;
  CHECK(gaussian_sigma_r(0, ucrl, conf) == 1.0);
  CHECK(gaussian_sigma_r(0, ucbvi, conf) == 1.0);
  CHECK(gaussian_sigma_r(7, ucrl, conf) == doctest::Approx(2 * beta_r(7, conf.delta_prime)));
  CHECK(gaussian_sigma_r(7, ucbvi, conf) ==
        doctest::Approx(2 * 20 * beta_r(7, conf.delta_prime)));
  CHECK(gaussian_sigma_p(7, ucrl, conf) ==
        doctest::Approx(2 * beta_p(7, 0.1 / 12, 6)));
  CHECK(gaussian_sigma_r(0, practical, conf) == doctest::Approx(std::sqrt(0.5)));
  CHECK(gaussian_sigma_r(8, practical, conf) == doctest::Approx(0.25));
  CHECK(gaussian_sigma_p(8, practical, conf) == doctest::Approx(0.25));
  CHECK_THROWS_AS(gaussian_sigma_r(3, gaussian(NoiseMode::kEnsembleBootstrap), conf),
                  std::invalid_argument);
}

TEST_CASE("noise configuration validation") {
  NoiseConfig c;
  c.m_r = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = NoiseConfig{};
  c.c = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = NoiseConfig{};
  c.keep_prob = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK(parse_noise_mode("gaussian-theory-ucrl") == NoiseMode::kGaussianTheoryUcrl);
  CHECK(to_string(NoiseMode::kFakeSampleBootstrap) == "fake-sample-bootstrap");
  CHECK_THROWS_AS(parse_noise_mode("uniform"), std::invalid_argument);
  c = NoiseConfig{};
  c.perturb_dynamics = false;
  CHECK_FALSE(c.uses_dynamics_noise());
}

TEST_CASE("noise ensembles are keyed by seed, episode and pair") {
  DataBuffer b(3, 2);
  b.record(0, 1, 0.5, 2);
  const auto conf = ConfidenceConfig::from_delta(0.1, 3, 2, 10, 4);
  const auto cfg = gaussian(NoiseMode::kGaussianPractical);
  const NoiseEnsemble a = sample_noise_ensemble(b, cfg, conf, 11, 3);
  CHECK(a == sample_noise_ensemble(b, cfg, conf, 11, 3));
  CHECK_FALSE(a == sample_noise_ensemble(b, cfg, conf, 11, 4));
  CHECK_FALSE(a == sample_noise_ensemble(b, cfg, conf, 12, 3));
  CHECK(a.m_r() == 10);
  CHECK(a.m_p() == 10);
  // Visiting (2, 0) rescales only that pair's draws.
  DataBuffer c = b;
  for (int i = 0; i < 4; ++i) c.record(2, 0, 0.1, 1);
  const NoiseEnsemble d = sample_noise_ensemble(c, cfg, conf, 11, 3);
  for (std::size_t m = 0; m < 10; ++m) {
    CHECK(d.reward(0, 1, m) == a.reward(0, 1, m));
    CHECK(d.reward(2, 0, m) == doctest::Approx(a.reward(2, 0, m) / 2.0));
  }
  auto rewards_only = cfg;
  rewards_only.perturb_dynamics = false;
  const NoiseEnsemble r = sample_noise_ensemble(b, rewards_only, conf, 11, 3);
  CHECK_FALSE(r.has_dynamics());
  CHECK(r.reward(1, 1, 4) == a.reward(1, 1, 4));
}

TEST_CASE("ensemble draws have the configured spread") {
  DataBuffer b(2, 1);
  for (int i = 0; i < 4; ++i) b.record(0, 0, 0.0, 0);
  const auto conf = ConfidenceConfig::from_delta(0.1, 2, 1, 10, 4);
  const auto cfg = gaussian(NoiseMode::kGaussianPractical);
  double sum = 0.0, sq = 0.0, dyn_sq = 0.0;
  const std::size_t episodes = 2000;
  for (std::size_t k = 0; k < episodes; ++k) {
    const NoiseEnsemble e = sample_noise_ensemble(b, cfg, conf, 5, k);
    for (std::size_t m = 0; m < 10; ++m) {
      sum += e.reward(0, 0, m);
      sq += e.reward(0, 0, m) * e.reward(0, 0, m);
      dyn_sq += e.dynamics(0, 0, m)[1] * e.dynamics(0, 0, m)[1];
    }
  }
  const double n = episodes * 10.0;
  CHECK(std::abs(sum / n) < 4 * 0.5 / std::sqrt(n));
  // Variance c / N = 1/4; the sample variance has sd ~ 0.25 sqrt(2/n).
  CHECK(std::abs(sq / n - 0.25) < 4 * 0.25 * std::sqrt(2.0 / n));
  CHECK(std::abs(dyn_sq / n - 0.25) < 4 * 0.25 * std::sqrt(2.0 / n));
}

TEST_CASE("minimum ensemble sizes and fake sample count") {
  const EnsembleSizes e = min_ensemble_sizes(6, 2, 20, 0.01);
  CHECK(e.m_r == 4);
  CHECK(e.m_p == 6);
  CHECK(min_ensemble_sizes(1, 1, 1, 0.9).m_r == 1);
  CHECK_THROWS_AS(min_ensemble_sizes(6, 2, 20, 0.0), std::invalid_argument);
  CHECK(default_fake_samples(20, 40000) == 212);
  CHECK(default_fake_samples(1, 1) == 2);
}

TEST_CASE("fake samples keep a 2 M_B : 1 ratio") {
  DataBuffer b(2, 2);
  Rng rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, 1);
  const std::size_t m_b = 7;
  for (int i = 0; i < 500; ++i) {
    const std::size_t s = pick(rng), a = pick(rng);
    b.record(s, a, 0.3, pick(rng));
    inject_fake_samples(b, s, a, m_b);
  }
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t a = 0; a < 2; ++a) {
      const RewardSamples& r = b.rewards(s, a);
      CHECK(r.fake_count == 2 * m_b * r.real_count);
      CHECK(r.fake.at(-1.0) == m_b * r.real_count);
      CHECK(r.fake.at(1.0) == m_b * r.real_count);
    }
  CHECK(fake_ratio_violations(200, 9) == 0);
}

TEST_CASE("bootstrap sample mean tracks the buffer mean") {
  DataBuffer b(1, 1);
  Rng fill(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 12; ++i) {
    b.record(0, 0, u(fill), 0);
    inject_fake_samples(b, 0, 0, 3);
  }
  const double target = b.rewards(0, 0).mean();
  Rng rng(2);
  const std::size_t draws = 10000;
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = bootstrap_reward_sample(b, 0, 0, rng);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / draws;
  const double se = std::sqrt((sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - target) <= 3 * se);
  CHECK_THROWS_AS(bootstrap_reward_sample(DataBuffer(1, 1), 0, 0, rng), std::invalid_argument);
  // A single sample is returned whatever the mask.
  DataBuffer one(1, 1);
  one.record(0, 0, 0.4, 0);
  CHECK(bootstrap_reward_sample(one, 0, 0, rng) == 0.4);
}

TEST_CASE("ensemble views fix their masks at insertion") {
  EnsembleViews views(3, 2, 10, 0.5, 0.0, 77);
  EnsembleViews twin(3, 2, 10, 0.5, 0.0, 77);
  Rng rng(4);
  std::size_t kept = 0, offered = 0;
  for (int k = 0; k < 200; ++k) {
    Trajectory t;
    for (std::size_t h = 0; h < 5; ++h) t.steps.push_back({h, h % 3, h % 2, 0.5, (h + 1) % 3});
    views.update(t);
    twin.update(t);
    offered += 5 * 10;
  }
  for (std::size_t m = 0; m < 10; ++m) {
    CHECK(views.view(m) == twin.view(m));
    kept += views.view(m).total_visits();
  }
  CHECK(std::abs(static_cast<double>(kept) / offered - 0.5) < 4 * std::sqrt(0.25 / offered));
  // keep_prob = 1: every view sees everything.
  EnsembleViews full(3, 2, 4, 1.0, 0.0, 1);
  Trajectory t;
  t.steps.push_back({0, 1, 1, 0.2, 2});
  full.update(t);
  for (std::size_t m = 0; m < 4; ++m) CHECK(full.view(m).visits(1, 1) == 1);
}

TEST_CASE("ensemble view prior counts as one pseudo-observation") {
  EnsembleViews views(2, 1, 3, 1.0, 1.0, 5);
  Trajectory t;
  t.steps.push_back({0, 0, 0, 0.8, 1});
  t.steps.push_back({1, 1, 0, 0.4, 0});
  views.update(t);
  views.update(t);
  for (std::size_t m = 0; m < 3; ++m) {
    const EmpiricalModel model = views.model(m);
    CHECK(model.r_hat[0] == doctest::Approx((views.prior(m, 0, 0) + 1.6) / 3.0));
    CHECK(model.p_hat[1] == 1.0);
  }
  CHECK(views.prior(0, 0, 0) != views.prior(1, 0, 0));
  EnsembleViews plain(2, 1, 3, 1.0, 0.0, 5);
  CHECK(plain.prior(1, 1, 0) == 0.0);
  CHECK_THROWS_AS(EnsembleViews(2, 1, 0, 0.5, 0.0, 1), std::invalid_argument);
}

TEST_CASE("clip_reward") {
  CHECK(clip_reward(-0.3) == 0.0);
  CHECK(clip_reward(0.3) == 0.3);
  CHECK(clip_reward(1.7) == 1.0);
}

TEST_CASE("Gaussian tail lower bound") {
  CHECK(gaussian_tail_lower_bound(1.0, 1.0) == doctest::Approx(0.12098536225957168).epsilon(1e-12));
  CHECK(gaussian_tail_lower_bound(0.5, 1.0) == doctest::Approx(0.14082613070571979).epsilon(1e-12));
  CHECK(gaussian_tail_lower_bound(3.0, 3.0) == doctest::Approx(0.12098536225957168).epsilon(1e-12));
  Rng rng(8);
  std::uniform_real_distribution<double> t(0.01, 6.0), s(0.05, 4.0);
  for (int i = 0; i < 100; ++i) {
    const double x = t(rng), sigma = s(rng);
    CHECK(gaussian_tail_lower_bound(x, sigma) <= 0.5 * std::erfc(x / sigma / std::sqrt(2.0)));
  }
  CHECK_THROWS_AS(gaussian_tail_lower_bound(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("reward anticoncentration at sigma = 2 beta") {
  const Frequency f = reward_anticoncentration(100000, 1);
  CHECK(f.value >= 0.298);
  CHECK(f.value <= 0.318);
  CHECK(normal_upper_tail(0.5) == doctest::Approx(0.3085375387259869).epsilon(1e-12));
}

}  // TEST_SUITE
