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

// Shared test helpers: independent oracles and finite differences.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sharpsearch/space.hpp"
#include "sharpsearch/surrogate.hpp"

namespace testing {

inline std::string data_path(const std::string& name) {
  return std::string(SHARPSEARCH_DATA_DIR) + "/" + name;
}

// |a - b| <= rel * max(|a|, |b|) + abs
inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs;
}

// Central difference of f at x along coordinate i.
inline double central_difference(const std::function<double(std::vector<double>&)>& f,
                                 std::vector<double> x, std::size_t i, double h = 1e-5) {
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = f(x);
  x[i] = x0 - h;
  const double down = f(x);
  return (up - down) / (2.0 * h);
}

// Matern 5/2 written out directly from its closed form.
inline double matern52_oracle(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              double lengthscale, double variance) {
  const double r = (a - b).norm() / lengthscale;
  const double s5 = std::sqrt(5.0) * r;
  return variance * (1.0 + s5 + 5.0 * r * r / 3.0) * std::exp(-s5);
}

struct OraclePrediction {
  double mean;
  double variance;
};

// GP posterior from an explicit dense inverse of the regularized Gram
// matrix, with the same standardization convention as the model. Computed
// in long double so the oracle is more accurate than the code under test.
inline OraclePrediction gp_oracle(std::span<const sharpsearch::Observation> obs,
                                  const sharpsearch::KernelParams& k, double jitter,
                                  std::span<const double> query,
                                  bool standardize = true) {
  using Real = long double;
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const auto n = static_cast<Eigen::Index>(obs.size());
  const auto d = static_cast<Eigen::Index>(query.size());
  auto kern = [&](const Vec& a, const Vec& b) {
    const Real r = (a - b).norm() / static_cast<Real>(k.lengthscale);
    const Real s5 = std::sqrt(Real{5}) * r;
    return static_cast<Real>(k.signal_variance) * (1 + s5 + 5 * r * r / 3) * std::exp(-s5);
  };
  Mat X(n, d);
  Vec y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& o = obs[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = o.point[static_cast<std::size_t>(j)];
    y(i) = o.value;
  }
  Real mean = 0, sd = 1;
  if (standardize) {
    mean = y.mean();
    if (n >= 2) {
      const Real var = (y.array() - mean).square().sum() / static_cast<Real>(n - 1);
      if (var > 0) sd = std::sqrt(var);
    }
  }
  const Vec ys = (y.array() - mean) / sd;
  Mat K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) K(i, j) = kern(X.row(i).transpose(), X.row(j).transpose());
    K(i, i) += static_cast<Real>(k.noise_variance) + static_cast<Real>(jitter);
  }
  const Mat Kinv = K.inverse();
  Vec q(d);
  for (Eigen::Index j = 0; j < d; ++j) q(j) = query[static_cast<std::size_t>(j)];
  Vec kx(n);
  for (Eigen::Index i = 0; i < n; ++i) kx(i) = kern(X.row(i).transpose(), q);
  const Real m = kx.dot(Kinv * ys);
  const Real v = static_cast<Real>(k.signal_variance) - kx.dot(Kinv * kx);
  return {static_cast<double>(mean + sd * m), static_cast<double>(sd * sd * v)};
}

}  // namespace testing
