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

// Maps a configuration over the trainer hyperparameter names to a network,
// optimizer and sharpening schedule:
//
//   conv(filter1, feat1) -> pool -> conv(filter2, feat2) -> pool ->
//   conv(filter3, feat3) -> dense(dense) [-> noise] -> population readout
//
// Every block carries batchnorm (bn_momentum_conv / bn_momentum_dense,
// bn_epsilon, bn_center, bn_scale). Names absent from the space fall back
// to default_assignments(). Feature counts and dense width are divided by
// width_divisor (minimum 1) to keep desk-scale training fast.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sharpsearch/space.hpp"
#include "sharpsearch/whetstone/network.hpp"
#include "sharpsearch/whetstone/optimizers.hpp"
#include "sharpsearch/whetstone/schedule.hpp"

namespace sharpsearch {

struct TrainerPlan {
  whetstone::NetworkSpec network;
  whetstone::OptimizerSettings optimizer;
  whetstone::SharpeningSchedule schedule;

  bool operator==(const TrainerPlan&) const = default;
};

struct MappingOptions {
  std::size_t width_divisor = 1;
  whetstone::ActivationKind activation = whetstone::ActivationKind::bounded_relu;
};

// Hyperparameter names understood by the mapping, in canonical order.
const std::vector<std::string>& trainer_parameter_names();
// Value used when a name is not part of the space.
const std::map<std::string, std::string, std::less<>>& default_assignments();

// Throws std::invalid_argument on names outside trainer_parameter_names()
// or values that cannot build a network.
TrainerPlan plan_from_config(const SearchSpace& space, const Configuration& config,
                             const MappingOptions& options = {});

whetstone::Network build_network_from_config(const SearchSpace& space,
                                             const Configuration& config, Rng& rng,
                                             const MappingOptions& options = {});

// Names whose value has no effect on the plan for this configuration
// (noise_std when noise_location is without_noise).
std::vector<std::string> ignored_parameters(const SearchSpace& space,
                                            const Configuration& config);

}  // namespace sharpsearch
