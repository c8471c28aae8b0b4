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

#include <numbers>

#include "doctest.h"
#include "sharpsearch/acquisition.hpp"
#include "support.hpp"

using namespace sharpsearch;

namespace {

// E[max(X - best - xi, 0)], X ~ N(mean, sigma^2), by composite Simpson
// quadrature over mean +- 12 sigma.
double ei_quadrature(double mean, double sigma, double best, double xi) {
  const int n = 200000;
  const double a = mean - 12 * sigma, b = mean + 12 * sigma;
  const double h = (b - a) / n;
  auto f = [&](double x) {
    const double z = (x - mean) / sigma;
    return std::max(x - best - xi, 0.0) * std::exp(-0.5 * z * z) /
           (sigma * std::sqrt(2 * std::numbers::pi));
  };
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

}  // namespace

TEST_SUITE("acquisition") {

TEST_CASE("normal helpers") {
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_cdf(-40.0) >= 0.0);
  CHECK(normal_cdf(40.0) == 1.0);
}

TEST_CASE("expected improvement edge cases") {
  CHECK(expected_improvement(0.3, 0.0, 0.5, 0.0) == 0.0);
  CHECK(expected_improvement(0.5, 0.0, 0.5, 0.0) == 0.0);
  CHECK(expected_improvement(0.7, 0.0, 0.5, 0.1) == doctest::Approx(0.1));
  CHECK(expected_improvement(0.4, 1.0, 0.4, 0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
}

TEST_CASE("expected improvement matches quadrature") {
  const double cases[][4] = {{0.2, 0.5, 0.3, 0.0}, {0.0, 1.0, 0.0, 0.01}, {1.0, 0.1, 0.5, 0.0},
                             {-1.0, 0.3, 0.5, 0.0}, {0.55, 0.02, 0.5, 0.01}};
  for (const auto& c : cases) {
    const double ei = expected_improvement(c[0], c[1] * c[1], c[2], c[3]);
    CHECK(ei >= 0.0);
    CHECK(testing::close(ei, ei_quadrature(c[0], c[1], c[2], c[3]), 1e-7, 1e-12));
  }
}

TEST_CASE("expected improvement is monotone in mean and in sigma") {
  double prev = 0.0;
  for (double m = -2.0; m <= 2.0; m += 0.05) {
    const double v = expected_improvement(m, 0.25, 0.0, 0.0);
    CHECK(v >= prev);
    prev = v;
  }
  prev = 0.0;
  for (double s = 0.0; s <= 2.0; s += 0.05) {
    const double v = expected_improvement(0.0, s * s, 0.3, 0.0);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("ucb and poi") {
  CHECK(upper_confidence_bound(0.5, 0.7, 0.0) == 0.5);
  CHECK(upper_confidence_bound(0.5, 0.04, 2.0) == doctest::Approx(0.9));
  CHECK(probability_of_improvement(0.5, 0.3, 0.5, 0.0) == 0.5);
  CHECK(probability_of_improvement(0.6, 0.0, 0.5, 0.0) == 1.0);
  CHECK(probability_of_improvement(0.5, 0.0, 0.5, 0.0) == 0.0);
  for (double m = -3; m <= 3; m += 0.5) {
    const double p = probability_of_improvement(m, 0.5, 0.1, 0.01);
    CHECK((p >= 0.0 && p <= 1.0));
  }
}

TEST_CASE("acquisition objects dispatch and validate") {
  const Prediction p{0.6, 0.09};
  CHECK(Acquisition::ei(0.0).score(p, 0.5) == expected_improvement(0.6, 0.09, 0.5, 0.0));
  CHECK(Acquisition::ucb(1.5).score(p, 0.5) == upper_confidence_bound(0.6, 0.09, 1.5));
  CHECK(Acquisition::poi(0.02).score(p, 0.5) == probability_of_improvement(0.6, 0.09, 0.5, 0.02));
  CHECK_THROWS(Acquisition::ei(-0.1).validate());
  CHECK(parse_acquisition_kind("ucb") == AcquisitionKind::upper_confidence_bound);
  CHECK(to_string(parse_acquisition_kind("poi")) == "poi");
  CHECK_THROWS(parse_acquisition_kind("pi"));
}

}  // TEST_SUITE
