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

// Flat `key = value` experiment configuration. `#` starts a comment. Agent
// keys accept a per-algorithm override written `<algorithm>.<key>`.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "narl/harness.hpp"

namespace narl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
  bool per_algorithm = false;
};

// Every accepted key with its default, in documentation order.
const std::vector<ConfigKey>& config_keys();

struct RunConfig {
  ExperimentSpec experiment;
  // Deep Sea sizes visited by `sweep`; empty unless configured.
  std::vector<std::size_t> sweep_sizes;
  // Resolved `key = value` lines (defaults filled in), for the output echo.
  std::vector<std::pair<std::string, std::string>> entries;
};

// Throws ConfigError on unknown keys, malformed values or invalid specs.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Text that parse_config maps back to the same RunConfig.
std::string render_config(const RunConfig& config);

}  // namespace narl
