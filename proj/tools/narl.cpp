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

// narl: run, sweep, verify and summarize tabular exploration experiments.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "narl/config.hpp"
#include "narl/harness.hpp"
#include "narl/io.hpp"
#include "narl/verification.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kConfigError = 1;
constexpr int kVerificationFailure = 2;

void print_summary(const narl::Summary& summary) {
  for (const narl::AlgorithmSummary& s : summary.algorithms) {
    const double regret = s.cum_regret.median.empty() ? 0.0 : s.cum_regret.median.back();
    std::printf("%-28s %-16s runs=%zu median_final_regret=%.4f", s.algo.c_str(),
                s.env.c_str(), s.runs, regret);
    if (s.median_solve_episode) {
      std::printf(" median_solve=%.1f\n", *s.median_solve_episode);
    } else {
      std::printf(" median_solve=unsolved\n");
    }
  }
}

void write_outputs(const std::vector<narl::RunRecord>& records,
                   const narl::ExperimentSpec& spec, const narl::Metadata& echo,
                   const fs::path& dir) {
  fs::create_directories(dir);
  narl::write_csv(records, (dir / "runs.csv").string());
  const narl::SolveRule rule{spec.solve_threshold, spec.solve_window};
  const narl::Summary summary = narl::summarize(records, rule);
  narl::write_summary_json(summary, rule, echo, (dir / "summary.json").string());
  print_summary(summary);
}

narl::Metadata echo_of(const narl::RunConfig& config) { return config.entries; }

int cmd_run(const std::string& path, std::size_t workers) {
  narl::RunConfig config = narl::load_config(path);
  if (workers > 0) config.experiment.workers = workers;
  const fs::path dir = config.experiment.output_dir;
  fs::create_directories(dir);
  narl::write_text(narl::render_config(config), (dir / "config.cfg").string());
  const auto records = narl::run_experiment(config.experiment);
  write_outputs(records, config.experiment, echo_of(config), dir);
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

int cmd_sweep(const std::string& path, std::size_t workers) {
  narl::RunConfig config = narl::load_config(path);
  if (workers > 0) config.experiment.workers = workers;
  if (config.experiment.env.name != "deepsea") {
    throw narl::ConfigError("config: sweep requires env = deepsea");
  }
  if (config.sweep_sizes.empty()) {
    throw narl::ConfigError("config: sweep_sizes is empty");
  }
  const fs::path root = config.experiment.output_dir;
  fs::create_directories(root);
  narl::write_text(narl::render_config(config), (root / "config.cfg").string());
  const narl::SolveRule rule{config.experiment.solve_threshold,
                             config.experiment.solve_window};
  nlohmann::ordered_json sweep;
  sweep["metadata"] = narl::summary_to_json({}, rule, echo_of(config))["metadata"];
  sweep["sizes"] = nlohmann::ordered_json::array();
  for (std::size_t n : config.sweep_sizes) {
    narl::ExperimentSpec spec = config.experiment;
    spec.env.n = n;
    const fs::path dir = root / spec.env.label();
    std::printf("== %s\n", spec.env.label().c_str());
    const auto records = narl::run_experiment(spec);
    write_outputs(records, spec, echo_of(config), dir);
    const narl::Summary summary = narl::summarize(records, rule);
    nlohmann::ordered_json entry;
    entry["n"] = n;
    entry["algorithms"] = nlohmann::ordered_json::array();
    for (const narl::AlgorithmSummary& s : summary.algorithms) {
      nlohmann::ordered_json algo;
      algo["algo"] = s.algo;
      algo["median_episodes_to_solve"] =
          s.median_solve_episode ? nlohmann::ordered_json(*s.median_solve_episode)
                                 : nlohmann::ordered_json(nullptr);
      auto& per_seed = algo["episodes_to_solve"] = nlohmann::ordered_json::array();
      for (const auto& [seed, episode] : s.solve_episodes) {
        per_seed.push_back({{"seed", seed},
                            {"episode", episode ? nlohmann::ordered_json(*episode)
                                                : nlohmann::ordered_json(nullptr)}});
      }
      entry["algorithms"].push_back(std::move(algo));
    }
    sweep["sizes"].push_back(std::move(entry));
  }
  narl::write_text(sweep.dump(2) + "\n", (root / "sweep.json").string());
  std::printf("wrote %s\n", (root / "sweep.json").string().c_str());
  return 0;
}

int cmd_verify(std::size_t trials, std::uint64_t seed) {
  const auto results = narl::run_check_suite(trials, seed);
  bool ok = true;
  for (const narl::CheckResult& r : results) {
    const char* tag = r.informational ? "INFO" : (r.passed ? "PASS" : "FAIL");
    std::printf("[%s] %s: %s\n", tag, r.name.c_str(), r.detail.c_str());
    if (!r.informational && !r.passed) ok = false;
  }
  std::printf("%s\n", ok ? "all checks passed" : "checks FAILED");
  return ok ? 0 : kVerificationFailure;
}

int cmd_summarize(const std::string& dir_arg) {
  const fs::path dir = dir_arg;
  narl::SolveRule rule;
  narl::Metadata echo;
  if (fs::exists(dir / "config.cfg")) {
    const narl::RunConfig config = narl::load_config((dir / "config.cfg").string());
    rule = {config.experiment.solve_threshold, config.experiment.solve_window};
    echo = config.entries;
  }
  const auto records = narl::read_csv((dir / "runs.csv").string());
  const narl::Summary summary = narl::summarize(records, rule);
  narl::write_summary_json(summary, rule, echo, (dir / "summary.json").string());
  print_summary(summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-augmented exploration experiments on tabular MDPs"};
  app.set_version_flag("--version", std::string(narl::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::size_t workers = 0;
  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--workers", workers, "Override the worker count");

  auto* sweep = app.add_subcommand("sweep", "Deep Sea size sweep");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_option("--workers", workers, "Override the worker count");

  std::size_t trials = 100000;
  std::uint64_t seed = 2026;
  auto* verify = app.add_subcommand("verify", "Monte Carlo check suite");
  verify->add_option("--trials", trials, "Draws per check");
  verify->add_option("--seed", seed, "Master seed");

  std::string dir;
  auto* summarize = app.add_subcommand("summarize", "Rebuild summary.json from runs.csv");
  summarize->add_option("dir", dir, "Output directory of a run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, workers);
    if (*sweep) return cmd_sweep(config_path, workers);
    if (*verify) return cmd_verify(trials, seed);
    if (*summarize) return cmd_summarize(dir);
  } catch (const narl::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return 0;
}
