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
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "narl/harness.hpp"

namespace narl {

inline constexpr const char* kCsvHeader =
    "algo,env,seed,episode,return,policy_value,optimistic_value,cum_regret";

// Floats are written with 10 significant digits. Throws std::runtime_error
// naming the path on I/O failure.
void write_csv(const std::vector<RunRecord>& records, const std::string& path);
std::string format_csv(const std::vector<RunRecord>& records);

// Rows grouped back into runs in file order. optimal_value is recovered from
// the first row (regret increment plus policy value).
std::vector<RunRecord> read_csv(const std::string& path);
std::vector<RunRecord> parse_csv(const std::string& text);

using Metadata = std::vector<std::pair<std::string, std::string>>;

nlohmann::ordered_json summary_to_json(const Summary& summary,
                                       const SolveRule& rule,
                                       const Metadata& config_echo);
void write_summary_json(const Summary& summary, const SolveRule& rule,
                        const Metadata& config_echo, const std::string& path);

void write_text(const std::string& text, const std::string& path);

}  // namespace narl
