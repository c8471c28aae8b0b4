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

#include "sharpsearch/surrogate.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sharpsearch/errors.hpp"
#include "sharpsearch/kernels.hpp"

namespace sharpsearch {

namespace {

constexpr double kJitterStart = 1e-10;
constexpr double kJitterMax = 1e-4;

// In-place lower Cholesky of a row-major n x n matrix. Returns false when a
// pivot is not strictly positive.
bool cholesky_in_place(std::vector<double>& a, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > 0.0) || !std::isfinite(diag)) return false;
    const double ljj = std::sqrt(diag);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / ljj;
    }
    for (std::size_t k = j + 1; k < n; ++k) a[j * n + k] = 0.0;
  }
  return true;
}

// Solves L x = b in place.
void forward_solve(std::span<const double> l, std::size_t n, std::span<double> b) {
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i * n + k] * b[k];
    b[i] = v / l[i * n + i];
  }
}

// Solves L^T x = b in place.
void backward_solve(std::span<const double> l, std::size_t n, std::span<double> b) {
  for (std::size_t i = n; i-- > 0;) {
    double v = b[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= l[k * n + i] * b[k];
    b[i] = v / l[i * n + i];
  }
}

}  // namespace

void KernelParams::validate() const {
  if (!(lengthscale > 0.0) || !(signal_variance > 0.0) ||
      !(noise_variance >= 0.0) || !std::isfinite(lengthscale) ||
      !std::isfinite(signal_variance) || !std::isfinite(noise_variance)) {
    throw std::invalid_argument(
        "kernel parameters need lengthscale > 0, signal_variance > 0, "
        "noise_variance >= 0");
  }
}

double kernel_eval(const KernelParams& params, std::span<const double> a,
                   std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sq += d * d;
  }
  return kernels::matern52(std::sqrt(sq), params.lengthscale,
                           params.signal_variance);
}

GpModel GpModel::prior(const KernelParams& params, std::size_t dimension) {
  params.validate();
  GpModel m;
  m.fitted_ = true;
  m.kernel_ = params;
  m.dimension_ = dimension;
  return m;
}

GpModel fit(std::span<const Observation> observations, const KernelParams& params,
            FitOptions options) {
  params.validate();
  if (observations.empty()) {
    throw std::invalid_argument("fit needs at least one observation");
  }
  const std::size_t n = observations.size();
  const std::size_t dim = observations.front().point.size();
  if (dim == 0) throw std::invalid_argument("fit: zero-dimensional points");

  GpModel m;
  m.kernel_ = params;
  m.dimension_ = dim;
  m.points_.reserve(n * dim);
  std::vector<double> raw;
  raw.reserve(n);
  for (const auto& obs : observations) {
    if (obs.point.size() != dim) {
      throw std::invalid_argument("fit: observations differ in dimension");
    }
    if (!std::isfinite(obs.value)) {
      throw std::invalid_argument("fit: non-finite observation value");
    }
    m.points_.insert(m.points_.end(), obs.point.begin(), obs.point.end());
    raw.push_back(obs.value);
  }

  if (options.standardize) {
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= static_cast<double>(n);
    double sd = 1.0;
    if (n >= 2) {
      double ss = 0.0;
      for (double v : raw) ss += (v - mean) * (v - mean);
      sd = std::sqrt(ss / static_cast<double>(n - 1));
      if (!(sd > 0.0)) sd = 1.0;
    }
    m.y_mean_ = mean;
    m.y_std_ = sd;
  }
  m.values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.values_[i] = (raw[i] - m.y_mean_) / m.y_std_;
  }

  std::vector<double> gram(n * n);
  kernels::omp::matern52_gram(m.points_, dim, params.lengthscale,
                              params.signal_variance, gram);
  bool ok = false;
  for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0000001;
       jitter *= 10.0) {
    m.factor_ = gram;
    for (std::size_t i = 0; i < n; ++i) {
      m.factor_[i * n + i] += params.noise_variance + jitter;
    }
    if (cholesky_in_place(m.factor_, n)) {
      m.jitter_ = jitter;
      ok = true;
      break;
    }
  }
  if (!ok) {
    throw SingularKernel("kernel matrix is not positive definite even with "
                         "jitter 1e-4");
  }
  m.alpha_ = m.values_;
  forward_solve(m.factor_, n, m.alpha_);
  backward_solve(m.factor_, n, m.alpha_);
  m.fitted_ = true;
  return m;
}

void GpModel::require_fitted(std::size_t query_dim) const {
  if (!fitted_) throw std::logic_error("predict called on an unfitted model");
  if (query_dim != dimension_) {
    throw std::invalid_argument("predict: query dimension mismatch");
  }
}

Prediction GpModel::predict_from_cross(std::span<const double> cross,
                                       bool clamp) const {
  const std::size_t n = values_.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += cross[i] * alpha_[i];
  std::vector<double> v(cross.begin(), cross.end());
  forward_solve(factor_, n, v);
  double reduction = 0.0;
  for (double x : v) reduction += x * x;
  double var = kernel_.signal_variance - reduction;
  if (clamp && var < 0.0) var = 0.0;
  return {y_mean_ + y_std_ * mean, y_std_ * y_std_ * var};
}

Prediction GpModel::predict_unclamped(std::span<const double> point) const {
  require_fitted(point.size());
  const std::size_t n = values_.size();
  std::vector<double> cross(n);
  if (n > 0) {
    kernels::reference::matern52_cross(points_, point, dimension_,
                                       kernel_.lengthscale,
                                       kernel_.signal_variance, cross);
  }
  return predict_from_cross(cross, false);
}

Prediction GpModel::predict(std::span<const double> point) const {
  Prediction p = predict_unclamped(point);
  if (p.variance < 0.0) p.variance = 0.0;
  return p;
}

std::vector<Prediction> GpModel::predict_many(std::span<const double> queries) const {
  if (!fitted_) throw std::logic_error("predict called on an unfitted model");
  if (dimension_ == 0 || queries.size() % dimension_ != 0) {
    throw std::invalid_argument("predict_many: query dimension mismatch");
  }
  const std::size_t q = queries.size() / dimension_;
  const std::size_t n = values_.size();
  std::vector<double> cross(q * n);
  if (n > 0) {
    kernels::omp::matern52_cross(points_, queries, dimension_,
                                 kernel_.lengthscale, kernel_.signal_variance,
                                 cross);
  }
  std::vector<Prediction> out(q);
  const auto count = static_cast<std::int64_t>(q);
#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < count; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    out[ua] = predict_from_cross(std::span<const double>(cross).subspan(ua * n, n),
                                 true);
  }
  return out;
}

double GpModel::log_marginal_likelihood() const {
  if (!fitted_) throw std::logic_error("model is not fitted");
  const std::size_t n = values_.size();
  double fit_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) fit_term += values_[i] * alpha_[i];
  double log_det = 0.0;
  for (std::size_t i = 0; i < n; ++i) log_det += std::log(factor_[i * n + i]);
  return -0.5 * fit_term - log_det -
         0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

double log_marginal_likelihood(const GpModel& model) {
  return model.log_marginal_likelihood();
}

KernelParams tune_kernel(std::span<const Observation> observations,
                         const KernelGrid& grid, FitOptions options) {
  if (observations.size() < 2 || grid.lengthscales.empty() ||
      grid.noise_variances.empty()) {
    return KernelParams{};
  }
  const double first = observations.front().value;
  bool constant = true;
  double mean = 0.0;
  for (const auto& o : observations) {
    constant = constant && o.value == first;
    mean += o.value;
  }
  mean /= static_cast<double>(observations.size());

  double signal = 1.0;
  if (!options.standardize) {
    double ss = 0.0;
    for (const auto& o : observations) ss += (o.value - mean) * (o.value - mean);
    ss /= static_cast<double>(observations.size() - 1);
    if (ss > 0.0) signal = ss;
  }

  double max_length = grid.lengthscales.front();
  for (double l : grid.lengthscales) max_length = std::max(max_length, l);
  double max_noise = grid.noise_variances.front();
  for (double v : grid.noise_variances) max_noise = std::max(max_noise, v);
  // Identical values carry no information about the kernel; every grid point
  // is treated as tied.
  if (constant) return {max_length, signal, max_noise};

  KernelParams best{grid.lengthscales.front(), signal,
                    grid.noise_variances.front()};
  double best_lml = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (double l : grid.lengthscales) {
    for (double noise : grid.noise_variances) {
      const KernelParams candidate{l, signal, noise};
      double lml;
      try {
        lml = fit(observations, candidate, options).log_marginal_likelihood();
      } catch (const SingularKernel&) {
        continue;
      }
      const bool better =
          !have || lml > best_lml ||
          (lml == best_lml &&
           (l > best.lengthscale ||
            (l == best.lengthscale && noise > best.noise_variance)));
      if (better) {
        best = candidate;
        best_lml = lml;
        have = true;
      }
    }
  }
  return best;
}

}  // namespace sharpsearch
