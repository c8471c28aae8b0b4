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

#include "sharpsearch/reports.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "sharpsearch/config_mapping.hpp"

namespace sharpsearch {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_records(const RunLog& log) {
  if (log.empty()) throw std::invalid_argument("run log is empty");
}

// Ignored-parameter detection only applies to trainer spaces.
std::vector<std::string> ignored_for(const RunLog& log, const Configuration& c) {
  try {
    return ignored_parameters(log.space(), c);
  } catch (const std::invalid_argument&) {
    return {};
  }
}

}  // namespace

std::string report_trace(const RunLog& log) {
  require_records(log);
  const auto best = log.best_so_far();
  std::string out = "iteration,value,best_so_far\n";
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& r = log.records()[i];
    out += std::to_string(r.iteration) + "," + format_double(r.value) + "," +
           format_double(best[i]) + "\n";
  }
  return out;
}

std::vector<HistogramRow> histogram(const RunLog& log) {
  require_records(log);
  const SearchSpace& space = log.space();
  const Configuration& best = log.best().config;
  std::vector<HistogramRow> rows;
  for (std::size_t s = 0; s < space.size(); ++s) {
    const auto& spec = space.spec(s);
    std::vector<std::size_t> counts(spec.size(), 0);
    for (const auto& r : log.records()) ++counts[r.config[s]];
    for (std::size_t o = 0; o < spec.size(); ++o) {
      rows.push_back({spec.name(), spec.label(o), counts[o], best[s] == o});
    }
  }
  return rows;
}

std::string report_hist(const RunLog& log) {
  std::string out = "hyperparameter,option,count,best\n";
  for (const auto& row : histogram(log)) {
    out += row.hyperparameter + "," + row.option + "," + std::to_string(row.count) + "," +
           (row.best ? "1" : "0") + "\n";
  }
  return out;
}

std::size_t SensitivityTable::marked_count() const {
  std::size_t n = 0;
  for (const auto& row : cells) {
    for (const auto& c : row) n += c.marked ? 1 : 0;
  }
  return n;
}

SensitivityTable sensitivity(const RunLog& log, std::span<const std::uint64_t> iterations) {
  require_records(log);
  if (iterations.empty()) throw std::invalid_argument("no experiments selected");
  const SearchSpace& space = log.space();
  SensitivityTable table;
  for (const auto& spec : space.specs()) table.rows.push_back(spec.name());
  table.rows.push_back("value");
  table.cells.assign(table.rows.size(), {});

  for (std::size_t col = 0; col < iterations.size(); ++col) {
    const std::uint64_t it = iterations[col];
    if (it == 0 || it > log.size()) {
      throw std::out_of_range("iteration " + std::to_string(it) + " is not in the log (1.." +
                              std::to_string(log.size()) + ")");
    }
    const RunRecord& rec = log.records()[it - 1];
    table.iterations.push_back(rec.iteration);
    const auto ignored = ignored_for(log, rec.config);
    for (std::size_t s = 0; s < space.size(); ++s) {
      SensitivityCell cell;
      const auto& name = space.spec(s).name();
      const bool skip = std::find(ignored.begin(), ignored.end(), name) != ignored.end();
      cell.text = skip ? "-" : space.label(rec.config, s);
      if (col > 0) cell.marked = cell.text != table.cells[s][col - 1].text;
      table.cells[s].push_back(std::move(cell));
    }
    table.cells.back().push_back({format_double(rec.value), false});
  }
  return table;
}

std::string report_sensitivity(const RunLog& log,
                               std::span<const std::uint64_t> iterations) {
  const SensitivityTable t = sensitivity(log, iterations);
  std::string out = "hyperparameter";
  for (auto it : t.iterations) out += ",iter" + std::to_string(it);
  out += "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += t.rows[r];
    for (const auto& c : t.cells[r]) out += "," + c.text + (c.marked ? "*" : "");
    out += "\n";
  }
  return out;
}

}  // namespace sharpsearch
