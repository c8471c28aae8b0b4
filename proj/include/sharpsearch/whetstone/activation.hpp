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

// Sharpenable activations. Sharpness s in [0,1] interpolates between a
// smooth unit (s = 0) and the binary step [x >= 0.5] (s = 1) by steepening
// the slope around 0.5 to 1/(1-s).

#include <string>

namespace sharpsearch::whetstone {

enum class ActivationKind { bounded_relu, sigmoid };

std::string to_string(ActivationKind kind);
ActivationKind parse_activation_kind(const std::string& name);

// Sharpness used for gradients once a layer is fully sharpened.
inline constexpr double kSurrogateSharpness = 0.999;

// Throws std::invalid_argument when s is outside [0,1].
void check_sharpness(double s);

double activation_forward(ActivationKind kind, double s, double x);
// Derivative of the s < 1 form; at s = 1 the s = 0.999 surrogate is used.
double activation_backward(ActivationKind kind, double s, double x);

}  // namespace sharpsearch::whetstone
