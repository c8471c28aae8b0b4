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

#include "sharpsearch/whetstone/activation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sharpsearch::whetstone {

namespace {

double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::string to_string(ActivationKind kind) {
  return kind == ActivationKind::bounded_relu ? "bounded_relu" : "sigmoid";
}

ActivationKind parse_activation_kind(const std::string& name) {
  if (name == "bounded_relu" || name == "brelu") return ActivationKind::bounded_relu;
  if (name == "sigmoid") return ActivationKind::sigmoid;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

void check_sharpness(double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("sharpness must lie in [0,1]");
  }
}

double activation_forward(ActivationKind kind, double s, double x) {
  check_sharpness(s);
  if (s == 1.0) return x >= 0.5 ? 1.0 : 0.0;
  const double z = (x - 0.5) / (1.0 - s);
  if (kind == ActivationKind::bounded_relu) return std::clamp(0.5 + z, 0.0, 1.0);
  return logistic(z);
}

double activation_backward(ActivationKind kind, double s, double x) {
  check_sharpness(s);
  if (s == 1.0) s = kSurrogateSharpness;
  const double slope = 1.0 / (1.0 - s);
  const double z = (x - 0.5) * slope;
  if (kind == ActivationKind::bounded_relu) {
    return (0.5 + z > 0.0 && 0.5 + z < 1.0) ? slope : 0.0;
  }
  const double y = logistic(z);
  return y * (1.0 - y) * slope;
}

}  // namespace sharpsearch::whetstone
