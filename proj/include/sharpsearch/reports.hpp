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

// Report rows computed from a run log alone. All output is comma-separated
// text with a header line.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sharpsearch/runlog.hpp"

namespace sharpsearch {

// iteration,value,best_so_far
std::string report_trace(const RunLog& log);

struct HistogramRow {
  std::string hyperparameter;
  std::string option;
  std::size_t count = 0;
  bool best = false;  // option chosen by the best record
};
std::vector<HistogramRow> histogram(const RunLog& log);
// hyperparameter,option,count,best
std::string report_hist(const RunLog& log);

struct SensitivityCell {
  std::string text;  // "-" when the parameter is ignored by that record
  bool marked = false;  // differs from the previous column
};
struct SensitivityTable {
  std::vector<std::uint64_t> iterations;  // column headers
  std::vector<std::string> rows;          // hyperparameter names, then "value"
  std::vector<std::vector<SensitivityCell>> cells;  // [row][column]
  std::size_t marked_count() const;
};
// Columns are records selected by 1-based iteration number. Only
// hyperparameter rows are marked; the value row is informational.
SensitivityTable sensitivity(const RunLog& log, std::span<const std::uint64_t> iterations);
// hyperparameter,iter<i>,... with marked cells suffixed by '*'
std::string report_sensitivity(const RunLog& log,
                               std::span<const std::uint64_t> iterations);

}  // namespace sharpsearch
