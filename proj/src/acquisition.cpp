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

#include "sharpsearch/acquisition.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sharpsearch {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double expected_improvement(double mean, double variance, double best, double xi) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  const double gain = mean - best - xi;
  if (sigma == 0.0) return std::max(gain, 0.0);
  const double z = gain / sigma;
  return std::max(gain * normal_cdf(z) + sigma * normal_pdf(z), 0.0);
}

double upper_confidence_bound(double mean, double variance, double kappa) {
  return mean + kappa * std::sqrt(std::max(variance, 0.0));
}

double probability_of_improvement(double mean, double variance, double best,
                                  double xi) {
  const double sigma = std::sqrt(std::max(variance, 0.0));
  const double gain = mean - best - xi;
  if (sigma == 0.0) return gain > 0.0 ? 1.0 : 0.0;
  return normal_cdf(gain / sigma);
}

void Acquisition::validate() const {
  if (!(parameter >= 0.0) || !std::isfinite(parameter)) {
    throw std::invalid_argument("acquisition parameter must be >= 0");
  }
}

double Acquisition::score(const Prediction& p, double best) const {
  switch (kind) {
    case AcquisitionKind::expected_improvement:
      return expected_improvement(p.mean, p.variance, best, parameter);
    case AcquisitionKind::upper_confidence_bound:
      return upper_confidence_bound(p.mean, p.variance, parameter);
    case AcquisitionKind::probability_of_improvement:
      return probability_of_improvement(p.mean, p.variance, best, parameter);
  }
  return 0.0;
}

std::string to_string(AcquisitionKind kind) {
  switch (kind) {
    case AcquisitionKind::expected_improvement:
      return "ei";
    case AcquisitionKind::upper_confidence_bound:
      return "ucb";
    case AcquisitionKind::probability_of_improvement:
      return "poi";
  }
  return "?";
}

AcquisitionKind parse_acquisition_kind(const std::string& name) {
  if (name == "ei") return AcquisitionKind::expected_improvement;
  if (name == "ucb") return AcquisitionKind::upper_confidence_bound;
  if (name == "poi") return AcquisitionKind::probability_of_improvement;
  throw std::invalid_argument("unknown acquisition '" + name +
                              "', expected ei, ucb or poi");
}

}  // namespace sharpsearch
