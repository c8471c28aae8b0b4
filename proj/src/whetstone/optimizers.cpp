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

#include "sharpsearch/whetstone/optimizers.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace sharpsearch::whetstone {

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::adadelta ? "adadelta" : "rmsprop";
}

OptimizerKind parse_optimizer_kind(const std::string& name) {
  std::string lower;
  for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "adadelta") return OptimizerKind::adadelta;
  if (lower == "rmsprop") return OptimizerKind::rmsprop;
  throw std::invalid_argument("unknown optimizer '" + name + "'");
}

void OptimizerSettings::validate() const {
  if (!(lr > 0.0) || !(rho >= 0.0 && rho < 1.0) || !(epsilon > 0.0) ||
      !(decay >= 0.0)) {
    throw std::invalid_argument(
        "optimizer needs lr > 0, 0 <= rho < 1, epsilon > 0, decay >= 0");
  }
}

void rmsprop_update(std::span<double> params, std::span<const double> grads,
                    std::span<double> acc, double lr, double rho, double epsilon) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    acc[i] = rho * acc[i] + (1.0 - rho) * g * g;
    params[i] -= lr * g / std::sqrt(acc[i] + epsilon);
  }
}

void adadelta_update(std::span<double> params, std::span<const double> grads,
                     std::span<double> acc, std::span<double> delta_acc, double lr,
                     double rho, double epsilon) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    acc[i] = rho * acc[i] + (1.0 - rho) * g * g;
    const double update =
        g * std::sqrt(delta_acc[i] + epsilon) / std::sqrt(acc[i] + epsilon);
    params[i] -= lr * update;
    delta_acc[i] = rho * delta_acc[i] + (1.0 - rho) * update * update;
  }
}

OptimizerState::OptimizerState(OptimizerSettings settings) : settings_(settings) {
  settings_.validate();
}

double OptimizerState::effective_lr() const {
  return settings_.lr / (1.0 + settings_.decay * static_cast<double>(iterations_));
}

void OptimizerState::step(std::span<const ParamRef> params) {
  if (acc_.empty()) {
    for (const auto& p : params) {
      acc_.emplace_back(p.values.size(), 0.0);
      delta_acc_.emplace_back(p.values.size(), 0.0);
    }
  }
  if (acc_.size() != params.size()) {
    throw std::invalid_argument("optimizer: parameter list changed between steps");
  }
  const double lr = effective_lr();
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (acc_[k].size() != params[k].values.size() ||
        params[k].grads.size() != params[k].values.size()) {
      throw std::invalid_argument("optimizer: parameter shape changed");
    }
    if (settings_.kind == OptimizerKind::rmsprop) {
      rmsprop_update(params[k].values, params[k].grads, acc_[k], lr, settings_.rho,
                     settings_.epsilon);
    } else {
      adadelta_update(params[k].values, params[k].grads, acc_[k], delta_acc_[k], lr,
                      settings_.rho, settings_.epsilon);
    }
  }
  ++iterations_;
}

}  // namespace sharpsearch::whetstone
