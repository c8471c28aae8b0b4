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

#include <string>

#include "sharpsearch/surrogate.hpp"

namespace sharpsearch {

double normal_pdf(double z);
double normal_cdf(double z);

// All acquisition functions assume maximization.
double expected_improvement(double mean, double variance, double best, double xi);
double upper_confidence_bound(double mean, double variance, double kappa);
double probability_of_improvement(double mean, double variance, double best,
                                  double xi);

enum class AcquisitionKind {
  expected_improvement,
  upper_confidence_bound,
  probability_of_improvement,
};

struct Acquisition {
  AcquisitionKind kind = AcquisitionKind::expected_improvement;
  // xi for EI/PI, kappa for UCB. Must be >= 0.
  double parameter = 0.01;

  static Acquisition ei(double xi = 0.01) {
    return {AcquisitionKind::expected_improvement, xi};
  }
  static Acquisition ucb(double kappa = 2.0) {
    return {AcquisitionKind::upper_confidence_bound, kappa};
  }
  static Acquisition poi(double xi = 0.01) {
    return {AcquisitionKind::probability_of_improvement, xi};
  }

  void validate() const;
  double score(const Prediction& p, double best) const;
};

// "ei", "ucb" or "poi".
std::string to_string(AcquisitionKind kind);
AcquisitionKind parse_acquisition_kind(const std::string& name);

}  // namespace sharpsearch
