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

// Objective adapters: exact lookup tables, seeded synthetic landscapes and
// the desk-scale trainer.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sharpsearch/config_mapping.hpp"
#include "sharpsearch/dataset.hpp"
#include "sharpsearch/optimizer.hpp"
#include "sharpsearch/space.hpp"

namespace sharpsearch {

// Configuration -> value table that covers the whole space.
class TabularBenchmark {
 public:
  TabularBenchmark(SearchSpace space, std::vector<double> values_by_rank);

  // Evaluates `fn` on every configuration (throws CardinalityExceeded).
  template <typename Fn>
  static TabularBenchmark materialize(const SearchSpace& space, Fn&& fn,
                                      std::uint64_t limit) {
    std::vector<double> values;
    for (const auto& c : enumerate_all(space, limit)) values.push_back(fn(c));
    return TabularBenchmark(space, std::move(values));
  }

  const SearchSpace& space() const { return space_; }
  std::size_t size() const { return values_.size(); }

  // Throws std::invalid_argument for configurations outside the space.
  double evaluate(const Configuration& config) const;
  const std::vector<double>& values() const { return values_; }

  // One line per configuration in enumeration order:
  //   name=label name=label ... value
  std::string to_text() const;
  static TabularBenchmark parse(std::string_view text, const SearchSpace& space);
  static TabularBenchmark load(const std::filesystem::path& path,
                               const SearchSpace& space);
  void save(const std::filesystem::path& path) const;

  Objective objective() const;

 private:
  SearchSpace space_;
  std::vector<double> values_;
};

// value = clamp(base + sum_i effect_i(choice_i)
//               + sum_{i<j} interaction_ij(choice_i, choice_j)
//               + noise_std * z(config), 0, 1)
// with effects, interactions and the per-configuration normal z all derived
// from the seed.
class SyntheticLandscape {
 public:
  SyntheticLandscape(SearchSpace space, std::uint64_t seed, double noise_std);

  const SearchSpace& space() const { return space_; }
  std::uint64_t seed() const { return seed_; }
  double noise_std() const { return noise_std_; }

  double evaluate(const Configuration& config) const;
  Objective objective() const;

 private:
  SearchSpace space_;
  std::uint64_t seed_;
  double noise_std_;
  double base_ = 0.5;
  std::vector<std::vector<double>> effects_;  // [spec][option]
  // [pair][option_i * size_j + option_j] for pairs (i<j) in row-major order
  std::vector<std::vector<double>> interactions_;
};

SyntheticLandscape make_synthetic(const SearchSpace& space, std::uint64_t seed,
                                  double noise_std);

struct TrainerSettings {
  std::size_t epochs = 40;
  std::size_t batch_size = 64;
  MappingOptions mapping{16};
};

// Trains the mapped network and scores final validation accuracy. Aux keys:
// binarized_val_accuracy, test_accuracy, binarized_test_accuracy,
// schedule_complete.
class TrainerObjective {
 public:
  TrainerObjective(std::shared_ptr<const DatasetSplit> data, SearchSpace space,
                   TrainerSettings settings = {});

  struct Detail {
    EvalOutcome outcome;
    whetstone::TrainResult result;
    TrainerPlan plan;
    std::optional<whetstone::Network> network;  // set when keep_network
  };
  Detail run(const Configuration& config, std::uint64_t seed,
             bool keep_network = false) const;

  EvalOutcome evaluate(const Configuration& config, std::uint64_t seed) const;
  Objective objective() const;

  const TrainerSettings& settings() const { return settings_; }

 private:
  std::shared_ptr<const DatasetSplit> data_;
  SearchSpace space_;
  TrainerSettings settings_;
};

}  // namespace sharpsearch
