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

// Adadelta and RMSprop with time-based learning-rate decay
// lr_t = lr / (1 + decay * t), t = number of completed steps.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sharpsearch/whetstone/layers.hpp"

namespace sharpsearch::whetstone {

enum class OptimizerKind { adadelta, rmsprop };

std::string to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(const std::string& name);

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::adadelta;
  double lr = 1.0;
  double rho = 0.9;
  double epsilon = 1e-6;
  double decay = 0.0;

  void validate() const;
  bool operator==(const OptimizerSettings&) const = default;
};

// acc <- rho acc + (1 - rho) g^2;  p <- p - lr * g / sqrt(acc + eps)
void rmsprop_update(std::span<double> params, std::span<const double> grads,
                    std::span<double> acc, double lr, double rho, double epsilon);

// acc <- rho acc + (1 - rho) g^2
// u = g sqrt(delta_acc + eps) / sqrt(acc + eps);  p <- p - lr * u
// delta_acc <- rho delta_acc + (1 - rho) u^2
void adadelta_update(std::span<double> params, std::span<const double> grads,
                     std::span<double> acc, std::span<double> delta_acc, double lr,
                     double rho, double epsilon);

class OptimizerState {
 public:
  explicit OptimizerState(OptimizerSettings settings);

  const OptimizerSettings& settings() const { return settings_; }
  std::size_t iterations() const { return iterations_; }
  double effective_lr() const;

  // One update over every parameter tensor. Accumulators are created as
  // zeros on first use and must keep their shapes afterwards.
  void step(std::span<const ParamRef> params);

  const std::vector<std::vector<double>>& accumulators() const { return acc_; }
  const std::vector<std::vector<double>>& delta_accumulators() const {
    return delta_acc_;
  }

 private:
  OptimizerSettings settings_;
  std::size_t iterations_ = 0;
  std::vector<std::vector<double>> acc_;
  std::vector<std::vector<double>> delta_acc_;
};

}  // namespace sharpsearch::whetstone
