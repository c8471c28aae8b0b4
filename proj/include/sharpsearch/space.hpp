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

// Finite, flat hyperparameter search spaces.
//
// A SearchSpace is an ordered list of specs; each spec is either categorical
// (symbolic options) or numeric-discrete (strictly increasing reals). A
// Configuration stores one option index per spec, in spec order.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sharpsearch {

using Rng = std::mt19937_64;

// Point in the surrogate's input domain, every coordinate in [0,1].
using EncodedPoint = std::vector<double>;

enum class SpecKind { categorical, numeric };

class HyperparameterSpec {
 public:
  static HyperparameterSpec categorical(std::string name,
                                        std::vector<std::string> options);
  // `labels` keeps the original spelling of each value for printing; when
  // empty, labels are generated from the values.
  static HyperparameterSpec numeric(std::string name, std::vector<double> values,
                                    std::vector<std::string> labels = {});

  const std::string& name() const { return name_; }
  SpecKind kind() const { return kind_; }
  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t option) const { return labels_.at(option); }
  const std::vector<std::string>& labels() const { return labels_; }
  // Numeric value of an option. Categorical specs return the option index.
  double value(std::size_t option) const;

  // Matches the label exactly, then (numeric specs) by value equality,
  // then case-insensitively against labels.
  std::optional<std::size_t> find(std::string_view text) const;
  std::optional<std::size_t> find_value(double value) const;

  // Coordinates this spec occupies in an EncodedPoint.
  std::size_t encoded_width() const {
    return kind_ == SpecKind::numeric ? 1 : size();
  }

  bool operator==(const HyperparameterSpec&) const = default;

 private:
  HyperparameterSpec() = default;
  std::string name_;
  SpecKind kind_ = SpecKind::categorical;
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<std::uint32_t> choices)
      : choices_(std::move(choices)) {}

  std::size_t size() const { return choices_.size(); }
  std::uint32_t operator[](std::size_t spec) const { return choices_[spec]; }
  std::span<const std::uint32_t> choices() const { return choices_; }
  Configuration with(std::size_t spec, std::uint32_t option) const;

  auto operator<=>(const Configuration&) const = default;

 private:
  std::vector<std::uint32_t> choices_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const noexcept;
};

class SearchSpace {
 public:
  SearchSpace() = default;
  // Throws std::invalid_argument on empty spaces or duplicate names.
  explicit SearchSpace(std::vector<HyperparameterSpec> specs);

  // Text format: one spec per line, `<name> <categorical|numeric> <opt>...`.
  // Blank lines and `#` comments are ignored. Throws ParseError.
  static SearchSpace parse(std::string_view text);
  static SearchSpace load(const std::filesystem::path& path);
  std::string to_text() const;

  const std::vector<HyperparameterSpec>& specs() const { return specs_; }
  const HyperparameterSpec& spec(std::size_t i) const { return specs_.at(i); }
  std::size_t size() const { return specs_.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  // Product of per-spec option counts; throws CardinalityOverflow.
  std::uint64_t cardinality() const;

  bool contains(const Configuration& config) const;
  // Throws std::invalid_argument naming the offending spec.
  void validate(const Configuration& config) const;

  // Mixed-radix rank in lexicographic order (first spec most significant).
  Configuration at(std::uint64_t rank) const;
  std::uint64_t rank(const Configuration& config) const;

  Configuration sample_uniform(Rng& rng) const;

  std::size_t encoded_dimension() const { return encoded_dimension_; }
  EncodedPoint encode(const Configuration& config) const;
  Configuration decode(std::span<const double> point) const;

  // Builds a configuration from name -> label text. Every spec must be
  // assigned; unknown names and unknown options throw std::invalid_argument.
  Configuration from_assignments(
      const std::map<std::string, std::string, std::less<>>& assignments) const;
  const std::string& label(const Configuration& config, std::size_t spec) const;
  // `name=label` pairs separated by single spaces, in spec order.
  std::string format(const Configuration& config) const;

  bool operator==(const SearchSpace&) const = default;

 private:
  std::vector<HyperparameterSpec> specs_;
  std::size_t encoded_dimension_ = 0;
};

// Single-consumer stream over every configuration in lexicographic order.
class ConfigurationStream {
 public:
  explicit ConfigurationStream(const SearchSpace& space);
  std::optional<Configuration> next();
  std::uint64_t remaining() const { return total_ - produced_; }

 private:
  const SearchSpace* space_;
  std::vector<std::uint32_t> current_;
  std::uint64_t total_;
  std::uint64_t produced_ = 0;
};

// Throws CardinalityExceeded when the space has more than `limit` points.
ConfigurationStream enumerate(const SearchSpace& space, std::uint64_t limit);
// Materialized form of enumerate().
std::vector<Configuration> enumerate_all(const SearchSpace& space,
                                         std::uint64_t limit);

}  // namespace sharpsearch
