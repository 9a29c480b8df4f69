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

#include "narl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace narl {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config: " + key + " expects a non-negative integer, got '" +
                      value + "'");
  }
  return out;
}

std::size_t to_size(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(to_u64(key, value));
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used == value.size()) return out;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
}

std::optional<double> to_optional(const std::string& key, const std::string& value) {
  if (value == "none") return std::nullopt;
  return to_double(key, value);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " expects true or false, got '" + value + "'");
}

bool mode_fits(Algorithm algorithm, NoiseMode mode) {
  AgentConfig probe;
  probe.algorithm = algorithm;
  probe.noise.mode = mode;
  try {
    probe.validate();
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"env", "riverswim", "riverswim | chain | deepsea | random"},
      {"n", "6", "riverswim/chain length, deepsea grid side"},
      {"horizon", "20", "episode length H (riverswim, chain, random)"},
      {"slip", "0.1", "chain: probability that FORWARD fails"},
      {"env_seed", "0", "base seed for deepsea action maps and random MDPs"},
      {"num_states", "4", "random: |S|"},
      {"num_actions", "2", "random: |A|"},
      {"algorithms", "narl-ucrl-gaussian", "comma-separated algorithm names"},
      {"episodes", "2000", "episodes K per run"},
      {"seeds", "20", "number of seeds per algorithm"},
      {"seed_offset", "0", "first seed; seeds are offset, offset+1, ..."},
      {"output_dir", "results", "directory for runs.csv and summary.json"},
      {"workers", "1", "threads used to run (algorithm, seed) pairs"},
      {"solve_threshold", "0.99", "solve rule: fraction of V* reached"},
      {"solve_window", "10", "solve rule: trailing episodes averaged"},
      {"stop_when_solved", "false", "end a run as soon as it meets the solve rule"},
      {"sweep_sizes", "10,12,14,16,18,20,22,24,26,28", "deepsea sizes for sweep"},
      {"mode", "auto", "noise mode; auto picks the algorithm default", true},
      {"c", "1", "practical Gaussian variance constant", true},
      {"M_r", "10", "reward noise draws per pair", true},
      {"M_P", "10", "dynamics noise draws per pair", true},
      {"M_B", "auto", "fake samples per sign; auto = ceil(H ln T)", true},
      {"M", "10", "ensemble-bootstrap views", true},
      {"keep_prob", "0.5", "ensemble-bootstrap inclusion probability", true},
      {"prior_scale", "1", "ensemble-bootstrap prior pseudo-reward scale", true},
      {"dynamics_noise", "true", "Gaussian modes: perturb transitions", true},
      {"ensemble_sizes", "fixed", "fixed (M_r, M_P) | auto (theory minimum)", true},
      {"delta", "0.1", "confidence level", true},
      {"epsilon", "none", "target gap; sets delta = epsilon / 4T", true},
      {"radius_filter", "none", "ensemble-bootstrap model radius", true},
      {"psrl_alpha0", "auto", "PSRL Dirichlet concentration; auto = 1/|S|", true},
  };
  return keys;
}

RunConfig parse_config(const std::string& text) {
  std::map<std::string, const ConfigKey*> known;
  for (const ConfigKey& key : config_keys()) known[key.name] = &key;

  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot != std::string::npos) {
      const std::string algo = key.substr(0, dot);
      const std::string field = key.substr(dot + 1);
      try {
        parse_algorithm(algo);
      } catch (const std::invalid_argument&) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown algorithm '" + algo + "'");
      }
      auto it = known.find(field);
      if (it == known.end() || !it->second->per_algorithm) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": '" + field + "' has no per-algorithm override");
      }
    } else if (!known.count(key)) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
    if (values.count(key)) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    values[key] = value;
    if (dot != std::string::npos) overrides.emplace_back(key, value);
  }

  RunConfig config;
  auto get = [&](const std::string& key) {
    auto it = values.find(key);
    return it != values.end() ? it->second : known.at(key)->default_value;
  };
  for (const ConfigKey& key : config_keys()) {
    config.entries.emplace_back(key.name, get(key.name));
  }
  std::sort(overrides.begin(), overrides.end());
  for (auto& entry : overrides) config.entries.push_back(entry);

  ExperimentSpec& spec = config.experiment;
  spec.env.name = get("env");
  if (spec.env.name != "riverswim" && spec.env.name != "chain" &&
      spec.env.name != "deepsea" && spec.env.name != "random") {
    throw ConfigError("config: unknown env '" + spec.env.name + "'");
  }
  spec.env.n = to_size("n", get("n"));
  spec.env.horizon = to_size("horizon", get("horizon"));
  spec.env.slip = to_double("slip", get("slip"));
  spec.env.seed = to_u64("env_seed", get("env_seed"));
  spec.env.num_states = to_size("num_states", get("num_states"));
  spec.env.num_actions = to_size("num_actions", get("num_actions"));
  spec.episodes = to_size("episodes", get("episodes"));
  const std::size_t num_seeds = to_size("seeds", get("seeds"));
  const std::uint64_t offset = to_u64("seed_offset", get("seed_offset"));
  for (std::size_t i = 0; i < num_seeds; ++i) spec.seeds.push_back(offset + i);
  spec.output_dir = get("output_dir");
  spec.workers = to_size("workers", get("workers"));
  spec.solve_threshold = to_double("solve_threshold", get("solve_threshold"));
  spec.solve_window = to_size("solve_window", get("solve_window"));
  spec.stop_when_solved = to_bool("stop_when_solved", get("stop_when_solved"));
  for (const std::string& size : split_list(get("sweep_sizes"))) {
    config.sweep_sizes.push_back(to_size("sweep_sizes", size));
  }

  std::set<std::string> seen;
  for (const std::string& name : split_list(get("algorithms"))) {
    if (!seen.insert(name).second) {
      throw ConfigError("config: algorithm '" + name + "' listed twice");
    }
    AgentConfig agent;
    try {
      agent.algorithm = parse_algorithm(name);
    } catch (const std::invalid_argument&) {
      throw ConfigError("config: unknown algorithm '" + name + "'");
    }
    auto field = [&](const std::string& key) {
      auto it = values.find(name + "." + key);
      return it != values.end() ? it->second : get(key);
    };
    const std::string mode = field("mode");
    if (mode == "auto") {
      agent.noise.mode = default_noise_mode(agent.algorithm);
    } else {
      try {
        agent.noise.mode = parse_noise_mode(mode);
      } catch (const std::invalid_argument&) {
        throw ConfigError("config: unknown noise mode '" + mode + "'");
      }
      // A global mode applies to the algorithms it fits.
      if (!values.count(name + ".mode") && !mode_fits(agent.algorithm, agent.noise.mode)) {
        agent.noise.mode = default_noise_mode(agent.algorithm);
      }
    }
    agent.noise.c = to_double("c", field("c"));
    agent.noise.m_r = to_size("M_r", field("M_r"));
    agent.noise.m_p = to_size("M_P", field("M_P"));
    const std::string m_b = field("M_B");
    agent.noise.m_b = m_b == "auto" ? 0 : to_size("M_B", m_b);
    agent.noise.ensemble_size = to_size("M", field("M"));
    agent.noise.keep_prob = to_double("keep_prob", field("keep_prob"));
    agent.noise.prior_scale = to_double("prior_scale", field("prior_scale"));
    agent.noise.perturb_dynamics = to_bool("dynamics_noise", field("dynamics_noise"));
    const std::string sizes = field("ensemble_sizes");
    if (sizes != "fixed" && sizes != "auto") {
      throw ConfigError("config: ensemble_sizes expects fixed or auto, got '" +
                        sizes + "'");
    }
    agent.auto_ensemble_sizes = sizes == "auto";
    agent.delta = to_double("delta", field("delta"));
    agent.epsilon = to_optional("epsilon", field("epsilon"));
    agent.radius_filter = to_optional("radius_filter", field("radius_filter"));
    const std::string alpha0 = field("psrl_alpha0");
    agent.prior.alpha0 = alpha0 == "auto" ? -1.0 : to_double("psrl_alpha0", alpha0);
    spec.agents.push_back({name, agent});
  }
  for (const auto& [key, value] : overrides) {
    if (!seen.count(key.substr(0, key.find('.')))) {
      throw ConfigError("config: override '" + key +
                        "' names an algorithm that is not listed");
    }
  }

  try {
    spec.validate();
    if (spec.env.name == "chain" && !(spec.env.slip >= 0.0 && spec.env.slip < 1.0)) {
      throw std::invalid_argument("slip must lie in [0,1)");
    }
    make_env(spec.env, spec.env.seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string render_config(const RunConfig& config) {
  std::string out;
  for (const auto& [key, value] : config.entries) {
    out += key + " = " + value + "\n";
  }
  return out;
}

}  // namespace narl
