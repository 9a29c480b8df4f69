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

#include "narl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace narl {
namespace {

std::string format_float(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

nlohmann::ordered_json band_to_json(const Band& band) {
  nlohmann::ordered_json out;
  out["median"] = band.median;
  out["q25"] = band.q25;
  out["q75"] = band.q75;
  return out;
}

}  // namespace

std::string format_csv(const std::vector<RunRecord>& records) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const RunRecord& r : records) {
    for (const EpisodeRow& row : r.rows) {
      out += r.algo + "," + r.env + "," + std::to_string(r.seed) + "," +
             std::to_string(row.episode) + "," + format_float(row.realized_return) +
             "," + format_float(row.policy_value) + "," +
             format_float(row.optimistic_value) + "," + format_float(row.cum_regret) +
             "\n";
    }
  }
  return out;
}

void write_text(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path);
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  write_text(format_csv(records), path);
}

std::vector<RunRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<RunRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw std::runtime_error("csv line " + std::to_string(line_no) +
                               ": expected 8 columns");
    }
    try {
      const std::uint64_t seed = std::stoull(cells[2]);
      EpisodeRow row{static_cast<std::size_t>(std::stoull(cells[3])),
                     std::stod(cells[4]), std::stod(cells[5]),
                     std::stod(cells[6]), std::stod(cells[7])};
      if (records.empty() || records.back().algo != cells[0] ||
          records.back().env != cells[1] || records.back().seed != seed) {
        records.push_back({cells[0], cells[1], seed,
                           row.cum_regret + row.policy_value, {}});
      }
      records.back().rows.push_back(row);
    } catch (const std::logic_error&) {
      throw std::runtime_error("csv line " + std::to_string(line_no) +
                               ": malformed number");
    }
  }
  return records;
}

std::vector<RunRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_csv(buffer.str());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

nlohmann::ordered_json summary_to_json(const Summary& summary,
                                       const SolveRule& rule,
                                       const Metadata& config_echo) {
  nlohmann::ordered_json out;
  auto& meta = out["metadata"];
  meta["version"] = kVersion;
  meta["solve_rule"] = {
      {"threshold", rule.threshold},
      {"window", rule.window},
      {"definition",
       "first episode whose trailing window of realized returns averages at "
       "least threshold * V*"}};
  nlohmann::ordered_json echo = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config_echo) echo[key] = value;
  meta["config"] = echo;
  out["algorithms"] = nlohmann::ordered_json::array();
  for (const AlgorithmSummary& s : summary.algorithms) {
    nlohmann::ordered_json algo;
    algo["algo"] = s.algo;
    algo["env"] = s.env;
    algo["runs"] = s.runs;
    algo["cum_regret"] = band_to_json(s.cum_regret);
    algo["return"] = band_to_json(s.episode_return);
    auto& solves = algo["episodes_to_solve"] = nlohmann::ordered_json::array();
    for (const auto& [seed, episode] : s.solve_episodes) {
      solves.push_back({{"seed", seed},
                        {"episode", episode ? nlohmann::ordered_json(*episode)
                                            : nlohmann::ordered_json(nullptr)}});
    }
    algo["median_episodes_to_solve"] =
        s.median_solve_episode ? nlohmann::ordered_json(*s.median_solve_episode)
                               : nlohmann::ordered_json(nullptr);
    out["algorithms"].push_back(std::move(algo));
  }
  return out;
}

void write_summary_json(const Summary& summary, const SolveRule& rule,
                        const Metadata& config_echo, const std::string& path) {
  write_text(summary_to_json(summary, rule, config_echo).dump(2) + "\n", path);
}

}  // namespace narl
