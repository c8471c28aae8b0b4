// Copyright 2026 The SharpSearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Append-only record of an optimization run.
//
// Serialized as JSON lines, one record per line with a fixed key order:
//   {"iteration":1,"phase":"init","config":{"lr":1,...},"value":0.53,
//    "seed":7,"wall_time":0.01}
// followed by optional "failed":true and "aux":{...} keys. Numeric
// hyperparameters are written as numbers, categorical ones as strings.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sharpsearch/space.hpp"

namespace sharpsearch {

enum class Phase { init, bayes, grid };

std::string to_string(Phase phase);
Phase parse_phase(std::string_view text);

struct RunRecord {
  std::uint64_t iteration = 0;
  Phase phase = Phase::init;
  Configuration config;
  double value = 0.0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;
  bool failed = false;
  // Extra metrics reported by the objective (e.g. binarized accuracy).
  std::map<std::string, double> aux;
};

class RunLog {
 public:
  explicit RunLog(SearchSpace space) : space_(std::move(space)) {}

  const SearchSpace& space() const { return space_; }
  const std::vector<RunRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Throws std::invalid_argument if the iteration index is not the next one
  // or the configuration is not valid in the space.
  void append(RunRecord record);

  // Index of the best record; earliest wins ties. Throws on an empty log.
  std::size_t best_index() const;
  const RunRecord& best() const { return records_[best_index()]; }
  std::vector<double> best_so_far() const;

  std::string to_jsonl() const;
  void save(const std::filesystem::path& path) const;

  // Parses against a known space; throws ParseError with the line number.
  static RunLog parse(std::string_view text, const SearchSpace& space);
  // Infers the space from the log: numeric values become numeric specs
  // (sorted), strings become categorical specs (first-seen order).
  static RunLog parse(std::string_view text);
  static RunLog load(const std::filesystem::path& path,
                     const std::optional<SearchSpace>& space = std::nullopt);

 private:
  SearchSpace space_;
  std::vector<RunRecord> records_;
};

// Copy of the JSONL text with every "wall_time" value zeroed, for
// determinism comparisons.
std::string strip_wall_time(std::string_view jsonl);

// Writes to a temporary sibling file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace sharpsearch
