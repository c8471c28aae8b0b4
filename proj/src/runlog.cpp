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

#include "sharpsearch/runlog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sharpsearch/errors.hpp"

namespace sharpsearch {

using ordered_json = nlohmann::ordered_json;

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::init:
      return "init";
    case Phase::bayes:
      return "bayes";
    case Phase::grid:
      return "grid";
  }
  return "?";
}

Phase parse_phase(std::string_view text) {
  if (text == "init") return Phase::init;
  if (text == "bayes") return Phase::bayes;
  if (text == "grid") return Phase::grid;
  throw std::invalid_argument("unknown phase '" + std::string(text) + "'");
}

void RunLog::append(RunRecord record) {
  if (record.iteration != records_.size() + 1) {
    throw std::invalid_argument("run log iteration " +
                                std::to_string(record.iteration) +
                                " out of sequence, expected " +
                                std::to_string(records_.size() + 1));
  }
  space_.validate(record.config);
  records_.push_back(std::move(record));
}

std::size_t RunLog::best_index() const {
  if (records_.empty()) throw std::logic_error("run log is empty");
  std::size_t best = 0;
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].value > records_[best].value) best = i;
  }
  return best;
}

std::vector<double> RunLog::best_so_far() const {
  std::vector<double> out;
  out.reserve(records_.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : records_) {
    best = std::max(best, r.value);
    out.push_back(best);
  }
  return out;
}

std::string RunLog::to_jsonl() const {
  std::string out;
  for (const auto& r : records_) {
    ordered_json j;
    j["iteration"] = r.iteration;
    j["phase"] = to_string(r.phase);
    ordered_json config = ordered_json::object();
    for (std::size_t i = 0; i < space_.size(); ++i) {
      const auto& spec = space_.spec(i);
      if (spec.kind() == SpecKind::numeric) {
        config[spec.name()] = spec.value(r.config[i]);
      } else {
        config[spec.name()] = spec.label(r.config[i]);
      }
    }
    j["config"] = std::move(config);
    j["value"] = r.value;
    j["seed"] = r.seed;
    j["wall_time"] = r.wall_time;
    if (r.failed) j["failed"] = true;
    if (!r.aux.empty()) j["aux"] = r.aux;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void RunLog::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_jsonl());
}

namespace {

std::vector<std::pair<std::size_t, ordered_json>> parse_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, ordered_json>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto j = ordered_json::parse(line);
      if (!j.is_object() || !j.contains("config") || !j["config"].is_object()) {
        throw ParseError("record is not an object with a config", line_no);
      }
      out.emplace_back(line_no, std::move(j));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line_no);
    }
  }
  return out;
}

RunRecord to_record(const ordered_json& j, const SearchSpace& space,
                    std::size_t line_no) {
  try {
    RunRecord r;
    r.iteration = j.at("iteration").get<std::uint64_t>();
    r.phase = parse_phase(j.at("phase").get<std::string>());
    const auto& config = j.at("config");
    if (config.size() != space.size()) {
      throw ParseError("config has " + std::to_string(config.size()) +
                           " entries, space has " + std::to_string(space.size()),
                       line_no);
    }
    std::vector<std::uint32_t> choices;
    for (const auto& spec : space.specs()) {
      if (!config.contains(spec.name())) {
        throw ParseError("config is missing '" + spec.name() + "'", line_no);
      }
      const auto& v = config.at(spec.name());
      std::optional<std::size_t> option;
      if (v.is_number()) {
        option = spec.kind() == SpecKind::numeric
                     ? spec.find_value(v.get<double>())
                     : std::nullopt;
      } else if (v.is_string()) {
        option = spec.find(v.get<std::string>());
      } else if (v.is_boolean()) {
        option = spec.find(v.get<bool>() ? "true" : "false");
      }
      if (!option) {
        throw ParseError("value " + v.dump() + " is not an option of '" +
                             spec.name() + "'",
                         line_no);
      }
      choices.push_back(static_cast<std::uint32_t>(*option));
    }
    r.config = Configuration(std::move(choices));
    r.value = j.at("value").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_time = j.at("wall_time").get<double>();
    r.failed = j.value("failed", false);
    if (j.contains("aux")) r.aux = j.at("aux").get<std::map<std::string, double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad record field: ") + e.what(), line_no);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), line_no);
  }
}

}  // namespace

RunLog RunLog::parse(std::string_view text, const SearchSpace& space) {
  RunLog log(space);
  for (const auto& [line_no, j] : parse_lines(text)) {
    try {
      log.append(to_record(j, space, line_no));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return log;
}

RunLog RunLog::parse(std::string_view text) {
  const auto lines = parse_lines(text);
  if (lines.empty()) throw ParseError("run log is empty", 0);

  struct Column {
    std::string name;
    bool numeric = true;
    std::vector<double> numbers;
    std::vector<std::string> labels;
  };
  std::vector<Column> columns;
  for (const auto& [key, v] : lines.front().second["config"].items()) {
    columns.push_back({key, v.is_number(), {}, {}});
  }
  for (const auto& [line_no, j] : lines) {
    const auto& config = j["config"];
    if (config.size() != columns.size()) {
      throw ParseError("config keys differ from the first record", line_no);
    }
    for (auto& col : columns) {
      if (!config.contains(col.name)) {
        throw ParseError("config is missing '" + col.name + "'", line_no);
      }
      const auto& v = config[col.name];
      if (col.numeric) {
        if (!v.is_number()) {
          throw ParseError("'" + col.name + "' mixes numbers and strings", line_no);
        }
        const double x = v.get<double>();
        if (std::find(col.numbers.begin(), col.numbers.end(), x) == col.numbers.end()) {
          col.numbers.push_back(x);
        }
      } else {
        const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        if (std::find(col.labels.begin(), col.labels.end(), s) == col.labels.end()) {
          col.labels.push_back(s);
        }
      }
    }
  }
  std::vector<HyperparameterSpec> specs;
  for (auto& col : columns) {
    if (col.numeric) {
      std::sort(col.numbers.begin(), col.numbers.end());
      specs.push_back(HyperparameterSpec::numeric(col.name, col.numbers));
    } else {
      specs.push_back(HyperparameterSpec::categorical(col.name, col.labels));
    }
  }
  SearchSpace space(std::move(specs));
  RunLog log(space);
  for (const auto& [line_no, j] : lines) {
    try {
      log.append(to_record(j, space, line_no));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return log;
}

RunLog RunLog::load(const std::filesystem::path& path,
                    const std::optional<SearchSpace>& space) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open run log " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return space ? parse(buf.str(), *space) : parse(buf.str());
}

std::string strip_wall_time(std::string_view jsonl) {
  std::string out;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    const std::size_t nl = jsonl.find('\n', pos);
    std::string_view line = jsonl.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    if (line.empty()) continue;
    auto j = ordered_json::parse(line);
    if (j.contains("wall_time")) j["wall_time"] = 0.0;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace sharpsearch
