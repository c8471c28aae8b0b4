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

#include "sharpsearch/config_mapping.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace sharpsearch {

namespace {

using whetstone::BatchNormSettings;
using whetstone::BlockSpec;
using whetstone::BlockType;

// Resolved name -> label text for one configuration.
class Assignment {
 public:
  Assignment(const SearchSpace& space, const Configuration& config) {
    space.validate(config);
    const auto& known = trainer_parameter_names();
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto& spec = space.spec(i);
      if (std::find(known.begin(), known.end(), spec.name()) == known.end()) {
        throw std::invalid_argument("unknown trainer hyperparameter '" + spec.name() +
                                    "'");
      }
      values_[spec.name()] = spec.label(config[i]);
    }
    for (const auto& [name, label] : default_assignments()) values_.emplace(name, label);
  }

  const std::string& text(const std::string& name) const { return values_.at(name); }

  double number(const std::string& name) const {
    const std::string& t = text(name);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.size() || !std::isfinite(v)) {
      throw std::invalid_argument(name + " needs a numeric value, got '" + t + "'");
    }
    return v;
  }

  std::size_t count(const std::string& name) const {
    const double v = number(name);
    if (v < 1.0 || v != std::floor(v)) {
      throw std::invalid_argument(name + " needs a positive integer");
    }
    return static_cast<std::size_t>(v);
  }

  bool flag(const std::string& name) const {
    std::string t;
    for (char c : text(name)) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw std::invalid_argument(name + " needs true or false");
  }

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

std::size_t scaled(std::size_t units, std::size_t divisor) {
  return std::max<std::size_t>(1, units / divisor);
}

bool noise_enabled(const std::string& location) {
  std::string t;
  for (char c : location) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "without_noise") return false;
  if (t == "after_first_dense") return true;
  throw std::invalid_argument("noise_location must be without_noise or after_first_dense");
}

}  // namespace

const std::vector<std::string>& trainer_parameter_names() {
  static const std::vector<std::string> names = {
      "lr",        "rho",           "epsilon",          "decay",
      "optimizer", "noise_std",     "noise_location",   "bn_momentum_conv",
      "bn_momentum_dense", "bn_epsilon", "bn_center",   "bn_scale",
      "sh_st",     "sh_du",         "sh_int",           "filter1",
      "filter2",   "filter3",       "feat1",            "feat2",
      "feat3",     "dense"};
  return names;
}

// Fixed values of the small search, with the searched names at the best
// configuration found there.
const std::map<std::string, std::string, std::less<>>& default_assignments() {
  static const std::map<std::string, std::string, std::less<>> defaults = {
      {"lr", "1"},
      {"rho", "0.9"},
      {"epsilon", "1e-6"},
      {"decay", "1e-6"},
      {"optimizer", "adadelta"},
      {"noise_std", "0.2"},
      {"noise_location", "without_noise"},
      {"bn_momentum_conv", "0.95"},
      {"bn_momentum_dense", "0.95"},
      {"bn_epsilon", "1e-3"},
      {"bn_center", "true"},
      {"bn_scale", "true"},
      {"sh_st", "25"},
      {"sh_du", "7"},
      {"sh_int", "2"},
      {"filter1", "3"},
      {"filter2", "5"},
      {"filter3", "3"},
      {"feat1", "128"},
      {"feat2", "256"},
      {"feat3", "512"},
      {"dense", "1024"},
  };
  return defaults;
}

TrainerPlan plan_from_config(const SearchSpace& space, const Configuration& config,
                             const MappingOptions& options) {
  if (options.width_divisor == 0) throw std::invalid_argument("width_divisor must be >= 1");
  const Assignment a(space, config);
  TrainerPlan plan;

  plan.optimizer.kind = whetstone::parse_optimizer_kind(a.text("optimizer"));
  plan.optimizer.lr = a.number("lr");
  plan.optimizer.rho = a.number("rho");
  plan.optimizer.epsilon = a.number("epsilon");
  plan.optimizer.decay = a.number("decay");
  plan.optimizer.validate();

  const double st = a.number("sh_st");
  const double in = a.number("sh_int");
  if (st < 0 || in < 0 || st != std::floor(st) || in != std::floor(in)) {
    throw std::invalid_argument("sharpening epochs must be non-negative integers");
  }
  plan.schedule = {static_cast<std::size_t>(st), a.count("sh_du"),
                   static_cast<std::size_t>(in)};

  const BatchNormSettings bn_conv{a.number("bn_momentum_conv"), a.number("bn_epsilon"),
                                  a.flag("bn_center"), a.flag("bn_scale")};
  BatchNormSettings bn_dense = bn_conv;
  bn_dense.momentum = a.number("bn_momentum_dense");

  auto& net = plan.network;
  net.activation = options.activation;
  for (int layer = 1; layer <= 3; ++layer) {
    BlockSpec b;
    b.type = BlockType::conv;
    b.filter = a.count("filter" + std::to_string(layer));
    b.units = scaled(a.count("feat" + std::to_string(layer)), options.width_divisor);
    b.pool = layer < 3;
    b.batchnorm = bn_conv;
    net.blocks.push_back(b);
  }
  BlockSpec dense;
  dense.type = BlockType::dense;
  dense.units = scaled(a.count("dense"), options.width_divisor);
  dense.batchnorm = bn_dense;
  if (noise_enabled(a.text("noise_location"))) {
    const double std = a.number("noise_std");
    if (std < 0) throw std::invalid_argument("noise_std must be non-negative");
    dense.noise_std = std;
  }
  net.blocks.push_back(dense);
  net.validate();
  return plan;
}

whetstone::Network build_network_from_config(const SearchSpace& space,
                                             const Configuration& config, Rng& rng,
                                             const MappingOptions& options) {
  return whetstone::Network(plan_from_config(space, config, options).network, rng);
}

std::vector<std::string> ignored_parameters(const SearchSpace& space,
                                            const Configuration& config) {
  const Assignment a(space, config);
  std::vector<std::string> ignored;
  if (!noise_enabled(a.text("noise_location")) && space.index_of("noise_std")) {
    ignored.push_back("noise_std");
  }
  return ignored;
}

}  // namespace sharpsearch
