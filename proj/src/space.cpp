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

#include "sharpsearch/space.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sharpsearch/errors.hpp"

namespace sharpsearch {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::optional<double> parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.';
  });
}

}  // namespace

// ---------------------------------------------------------------------------

HyperparameterSpec HyperparameterSpec::categorical(
    std::string name, std::vector<std::string> options) {
  if (!valid_identifier(name)) {
    throw std::invalid_argument("invalid hyperparameter name '" + name + "'");
  }
  if (options.empty()) {
    throw std::invalid_argument("hyperparameter '" + name + "' has no options");
  }
  std::set<std::string, std::less<>> seen;
  for (const auto& o : options) {
    if (o.empty() || o.find_first_of(" \t=;,") != std::string::npos) {
      throw std::invalid_argument("hyperparameter '" + name +
                                  "' has an invalid option '" + o + "'");
    }
    if (!seen.insert(o).second) {
      throw std::invalid_argument("hyperparameter '" + name +
                                  "' lists option '" + o + "' twice");
    }
  }
  HyperparameterSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = SpecKind::categorical;
  spec.labels_ = std::move(options);
  return spec;
}

HyperparameterSpec HyperparameterSpec::numeric(std::string name,
                                               std::vector<double> values,
                                               std::vector<std::string> labels) {
  if (!valid_identifier(name)) {
    throw std::invalid_argument("invalid hyperparameter name '" + name + "'");
  }
  if (values.empty()) {
    throw std::invalid_argument("hyperparameter '" + name + "' has no values");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw std::invalid_argument("hyperparameter '" + name +
                                  "' has a non-finite value");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw std::invalid_argument("values of hyperparameter '" + name +
                                  "' must be strictly increasing");
    }
  }
  if (labels.empty()) {
    for (double v : values) labels.push_back(format_number(v));
  } else if (labels.size() != values.size()) {
    throw std::invalid_argument("hyperparameter '" + name +
                                "': label count differs from value count");
  }
  HyperparameterSpec spec;
  spec.name_ = std::move(name);
  spec.kind_ = SpecKind::numeric;
  spec.labels_ = std::move(labels);
  spec.values_ = std::move(values);
  return spec;
}

double HyperparameterSpec::value(std::size_t option) const {
  if (option >= size()) throw std::out_of_range("option index out of range");
  return kind_ == SpecKind::numeric ? values_[option]
                                    : static_cast<double>(option);
}

std::optional<std::size_t> HyperparameterSpec::find(std::string_view text) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == text) return i;
  }
  if (kind_ == SpecKind::numeric) {
    if (auto v = parse_number(text)) return find_value(*v);
    return std::nullopt;
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (iequals(labels_[i], text)) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> HyperparameterSpec::find_value(double value) const {
  if (kind_ != SpecKind::numeric) return std::nullopt;
  auto it = std::lower_bound(values_.begin(), values_.end(), value);
  if (it != values_.end() && *it == value) {
    return static_cast<std::size_t>(it - values_.begin());
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Configuration Configuration::with(std::size_t spec, std::uint32_t option) const {
  Configuration copy = *this;
  copy.choices_.at(spec) = option;
  return copy;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::uint32_t v : c.choices()) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

// ---------------------------------------------------------------------------

SearchSpace::SearchSpace(std::vector<HyperparameterSpec> specs)
    : specs_(std::move(specs)) {
  if (specs_.empty()) {
    throw std::invalid_argument("search space needs at least one hyperparameter");
  }
  std::set<std::string, std::less<>> names;
  for (const auto& s : specs_) {
    if (!names.insert(s.name()).second) {
      throw std::invalid_argument("duplicate hyperparameter name '" + s.name() +
                                  "'");
    }
    encoded_dimension_ += s.encoded_width();
  }
}

SearchSpace SearchSpace::parse(std::string_view text) {
  std::vector<HyperparameterSpec> specs;
  std::set<std::string, std::less<>> names;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() < 3) {
      throw ParseError("expected '<name> <categorical|numeric> <option>...'",
                       line_no);
    }
    const std::string name(tokens[0]);
    if (!names.insert(name).second) {
      throw ParseError("duplicate hyperparameter name '" + name + "'", line_no);
    }
    try {
      if (tokens[1] == "categorical") {
        std::vector<std::string> options(tokens.begin() + 2, tokens.end());
        specs.push_back(HyperparameterSpec::categorical(name, std::move(options)));
      } else if (tokens[1] == "numeric") {
        std::vector<double> values;
        std::vector<std::string> labels;
        for (auto it = tokens.begin() + 2; it != tokens.end(); ++it) {
          auto v = parse_number(*it);
          if (!v) {
            throw ParseError("'" + std::string(*it) + "' is not a number", line_no);
          }
          values.push_back(*v);
          labels.emplace_back(*it);
        }
        specs.push_back(HyperparameterSpec::numeric(name, std::move(values),
                                                    std::move(labels)));
      } else {
        throw ParseError("unknown kind '" + std::string(tokens[1]) +
                             "', expected categorical or numeric",
                         line_no);
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (specs.empty()) throw ParseError("space file defines no hyperparameters", 0);
  return SearchSpace(std::move(specs));
}

SearchSpace SearchSpace::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open space file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

std::string SearchSpace::to_text() const {
  std::string out;
  for (const auto& s : specs_) {
    out += s.name();
    out += s.kind() == SpecKind::numeric ? " numeric" : " categorical";
    for (const auto& l : s.labels()) {
      out += ' ';
      out += l;
    }
    out += '\n';
  }
  return out;
}

std::optional<std::size_t> SearchSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name() == name) return i;
  }
  return std::nullopt;
}

std::uint64_t SearchSpace::cardinality() const {
  std::uint64_t total = 1;
  for (const auto& s : specs_) {
    if (__builtin_mul_overflow(total, static_cast<std::uint64_t>(s.size()),
                               &total)) {
      throw CardinalityOverflow("search space cardinality overflows 64 bits");
    }
  }
  return total;
}

bool SearchSpace::contains(const Configuration& config) const {
  if (config.size() != specs_.size()) return false;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (config[i] >= specs_[i].size()) return false;
  }
  return true;
}

void SearchSpace::validate(const Configuration& config) const {
  if (config.size() != specs_.size()) {
    throw std::invalid_argument("configuration has " +
                                std::to_string(config.size()) +
                                " assignments, space has " +
                                std::to_string(specs_.size()) + " hyperparameters");
  }
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (config[i] >= specs_[i].size()) {
      throw std::invalid_argument("option index " + std::to_string(config[i]) +
                                  " out of range for '" + specs_[i].name() + "'");
    }
  }
}

Configuration SearchSpace::at(std::uint64_t rank) const {
  if (rank >= cardinality()) throw std::out_of_range("configuration rank out of range");
  std::vector<std::uint32_t> choices(specs_.size());
  for (std::size_t i = specs_.size(); i-- > 0;) {
    const std::uint64_t k = specs_[i].size();
    choices[i] = static_cast<std::uint32_t>(rank % k);
    rank /= k;
  }
  return Configuration(std::move(choices));
}

std::uint64_t SearchSpace::rank(const Configuration& config) const {
  validate(config);
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    r = r * specs_[i].size() + config[i];
  }
  return r;
}

Configuration SearchSpace::sample_uniform(Rng& rng) const {
  std::vector<std::uint32_t> choices;
  choices.reserve(specs_.size());
  for (const auto& s : specs_) {
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(s.size() - 1));
    choices.push_back(pick(rng));
  }
  return Configuration(std::move(choices));
}

EncodedPoint SearchSpace::encode(const Configuration& config) const {
  validate(config);
  EncodedPoint point;
  point.reserve(encoded_dimension_);
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    if (s.kind() == SpecKind::numeric) {
      const std::size_t k = s.size();
      point.push_back(k == 1 ? 0.0
                             : static_cast<double>(config[i]) /
                                   static_cast<double>(k - 1));
    } else {
      for (std::size_t o = 0; o < s.size(); ++o) {
        point.push_back(o == config[i] ? 1.0 : 0.0);
      }
    }
  }
  return point;
}

Configuration SearchSpace::decode(std::span<const double> point) const {
  constexpr double kTolerance = 1e-9;
  if (point.size() != encoded_dimension_) {
    throw std::invalid_argument("encoded point has dimension " +
                                std::to_string(point.size()) + ", expected " +
                                std::to_string(encoded_dimension_));
  }
  for (double c : point) {
    if (!(c >= -kTolerance && c <= 1.0 + kTolerance)) {
      throw std::invalid_argument("encoded coordinate outside [0,1]");
    }
  }
  std::vector<std::uint32_t> choices;
  choices.reserve(specs_.size());
  std::size_t offset = 0;
  for (const auto& s : specs_) {
    if (s.kind() == SpecKind::numeric) {
      const double k = static_cast<double>(s.size() - 1);
      const double r = std::clamp(std::round(point[offset] * k), 0.0, k);
      choices.push_back(static_cast<std::uint32_t>(r));
      offset += 1;
    } else {
      std::size_t best = 0;
      for (std::size_t o = 1; o < s.size(); ++o) {
        if (point[offset + o] > point[offset + best]) best = o;
      }
      choices.push_back(static_cast<std::uint32_t>(best));
      offset += s.size();
    }
  }
  return Configuration(std::move(choices));
}

Configuration SearchSpace::from_assignments(
    const std::map<std::string, std::string, std::less<>>& assignments) const {
  for (const auto& [name, value] : assignments) {
    if (!index_of(name)) {
      throw std::invalid_argument("unknown hyperparameter '" + name + "'");
    }
  }
  std::vector<std::uint32_t> choices;
  for (const auto& s : specs_) {
    auto it = assignments.find(s.name());
    if (it == assignments.end()) {
      throw std::invalid_argument("missing value for hyperparameter '" +
                                  s.name() + "'");
    }
    auto option = s.find(it->second);
    if (!option) {
      throw std::invalid_argument("'" + it->second + "' is not an option of '" +
                                  s.name() + "'");
    }
    choices.push_back(static_cast<std::uint32_t>(*option));
  }
  return Configuration(std::move(choices));
}

const std::string& SearchSpace::label(const Configuration& config,
                                      std::size_t spec) const {
  return specs_.at(spec).label(config[spec]);
}

std::string SearchSpace::format(const Configuration& config) const {
  validate(config);
  std::string out;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (i > 0) out += ' ';
    out += specs_[i].name();
    out += '=';
    out += specs_[i].label(config[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

ConfigurationStream::ConfigurationStream(const SearchSpace& space)
    : space_(&space),
      current_(space.size(), 0),
      total_(space.cardinality()) {}

std::optional<Configuration> ConfigurationStream::next() {
  if (produced_ >= total_) return std::nullopt;
  Configuration out(current_);
  ++produced_;
  for (std::size_t i = current_.size(); i-- > 0;) {
    if (++current_[i] < space_->spec(i).size()) break;
    current_[i] = 0;
  }
  return out;
}

ConfigurationStream enumerate(const SearchSpace& space, std::uint64_t limit) {
  const std::uint64_t n = space.cardinality();
  if (n > limit) throw CardinalityExceeded(n, limit);
  return ConfigurationStream(space);
}

std::vector<Configuration> enumerate_all(const SearchSpace& space,
                                         std::uint64_t limit) {
  auto stream = enumerate(space, limit);
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(stream.remaining()));
  while (auto c = stream.next()) out.push_back(std::move(*c));
  return out;
}

}  // namespace sharpsearch
