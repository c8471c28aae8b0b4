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

// Gaussian-process regression over encoded configurations.
//
// Isotropic Matern 5/2 kernel, observation values standardized before the
// fit, Cholesky factorization with escalating diagonal jitter.

#include <span>
#include <vector>

#include "sharpsearch/space.hpp"

namespace sharpsearch {

struct KernelParams {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;

  // Throws std::invalid_argument unless lengthscale > 0, signal_variance > 0
  // and noise_variance >= 0.
  void validate() const;
  bool operator==(const KernelParams&) const = default;
};

struct Observation {
  EncodedPoint point;
  double value = 0.0;
};

struct FitOptions {
  // Subtract the mean and divide by the sample standard deviation.
  bool standardize = true;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

double kernel_eval(const KernelParams& params, std::span<const double> a,
                   std::span<const double> b);

class GpModel;
GpModel fit(std::span<const Observation> observations, const KernelParams& params,
            FitOptions options = {});

class GpModel {
 public:
  // An unfitted model; predict() throws.
  GpModel() = default;

  // Zero-observation model: mean 0, variance = signal variance.
  static GpModel prior(const KernelParams& params, std::size_t dimension);

  bool fitted() const { return fitted_; }
  std::size_t size() const { return values_.size(); }
  std::size_t dimension() const { return dimension_; }
  const KernelParams& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }
  double y_mean() const { return y_mean_; }
  double y_std() const { return y_std_; }
  // Training inputs, row-major [size()][dimension()].
  std::span<const double> points() const { return points_; }
  // Lower-triangular factor of K + (noise + jitter) I, row-major.
  std::span<const double> cholesky() const { return factor_; }

  // Predictive distribution of the latent function, de-standardized, with
  // the variance clamped at zero.
  Prediction predict(std::span<const double> point) const;
  // Same as predict() but leaves a slightly negative round-off variance as is.
  Prediction predict_unclamped(std::span<const double> point) const;
  // Batched prediction over row-major queries [q][dimension()].
  std::vector<Prediction> predict_many(std::span<const double> queries) const;

  // Log evidence of the standardized values under the fitted kernel.
  double log_marginal_likelihood() const;

 private:
  friend GpModel fit(std::span<const Observation>, const KernelParams&,
                     FitOptions);
  void require_fitted(std::size_t query_dim) const;
  Prediction predict_from_cross(std::span<const double> cross,
                                bool clamp) const;

  bool fitted_ = false;
  KernelParams kernel_;
  std::size_t dimension_ = 0;
  std::vector<double> points_;
  std::vector<double> values_;  // standardized
  std::vector<double> factor_;
  std::vector<double> alpha_;
  double jitter_ = 0.0;
  double y_mean_ = 0.0;
  double y_std_ = 1.0;
};

double log_marginal_likelihood(const GpModel& model);

struct KernelGrid {
  std::vector<double> lengthscales{0.1, 0.3, 1.0, 3.0};
  std::vector<double> noise_variances{1e-6, 1e-4, 1e-2};
};

// Exhaustive grid search for the kernel maximizing the log marginal
// likelihood. Ties go to the larger lengthscale, then the larger noise.
// With fewer than two observations returns KernelParams{}.
KernelParams tune_kernel(std::span<const Observation> observations,
                         const KernelGrid& grid = {}, FitOptions options = {});

}  // namespace sharpsearch
