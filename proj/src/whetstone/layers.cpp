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

#include "sharpsearch/whetstone/layers.hpp"

#include <cmath>
#include <stdexcept>

#include "sharpsearch/kernels.hpp"

namespace sharpsearch::whetstone {

namespace {

constexpr double kInitialBias = 0.5;

void glorot_uniform(std::vector<double>& w, std::size_t fan_in, std::size_t fan_out,
                    Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (double& v : w) v = dist(rng);
}

void check_input(const Tensor& in, Shape expected, const char* layer) {
  if (in.shape != expected || in.data.size() != in.batch * expected.size()) {
    throw std::invalid_argument(std::string(layer) + ": input shape mismatch");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// dense

DenseLayer::DenseLayer(std::size_t in, std::size_t out, Rng& rng)
    : in_(in),
      out_(out),
      weights_(in * out),
      bias_(out, kInitialBias),
      grad_weights_(in * out, 0.0),
      grad_bias_(out, 0.0) {
  if (in == 0 || out == 0) throw std::invalid_argument("dense layer needs units");
  glorot_uniform(weights_, in, out, rng);
}

Tensor DenseLayer::forward(const Tensor& in, const ForwardContext& ctx) {
  if (in.shape.size() != in_) throw std::invalid_argument("dense: input size mismatch");
  Tensor out(in.batch, {out_, 1, 1});
  kernels::omp::dense_forward({in.batch, in_, out_}, in.data, weights_, bias_,
                              out.data);
  if (ctx.training) input_ = in;
  return out;
}

Tensor DenseLayer::backward(const Tensor& grad_out) {
  const kernels::DenseShape s{grad_out.batch, in_, out_};
  kernels::omp::dense_backward_params(s, grad_out.data, input_.data, grad_weights_,
                                      grad_bias_);
  Tensor grad_in(grad_out.batch, input_.shape);
  kernels::omp::dense_backward_input(s, grad_out.data, weights_, grad_in.data);
  return grad_in;
}

std::vector<ParamRef> DenseLayer::params() {
  return {{"weights", weights_, grad_weights_}, {"bias", bias_, grad_bias_}};
}

std::vector<StateRef> DenseLayer::state() {
  return {{"weights", &weights_}, {"bias", &bias_}};
}

// ---------------------------------------------------------------------------
// conv

ConvLayer::ConvLayer(Shape in, std::size_t out_channels, std::size_t filter,
                     Rng& rng)
    : in_(in),
      out_channels_(out_channels),
      filter_(filter),
      weights_(out_channels * in.channels * filter * filter),
      bias_(out_channels, kInitialBias),
      grad_weights_(weights_.size(), 0.0),
      grad_bias_(out_channels, 0.0) {
  if (filter % 2 == 0 || filter == 0) {
    throw std::invalid_argument("conv filter size must be odd");
  }
  if (out_channels == 0 || in.size() == 0) {
    throw std::invalid_argument("conv layer needs channels");
  }
  glorot_uniform(weights_, in.channels * filter * filter,
                 out_channels * filter * filter, rng);
}

Tensor ConvLayer::forward(const Tensor& in, const ForwardContext& ctx) {
  check_input(in, in_, "conv");
  Tensor out(in.batch, output_shape());
  const kernels::ConvShape s{in.batch, in_.channels, out_channels_,
                             in_.height, in_.width,   filter_};
  kernels::omp::conv_forward(s, in.data, weights_, bias_, out.data);
  if (ctx.training) input_ = in;
  return out;
}

Tensor ConvLayer::backward(const Tensor& grad_out) {
  const kernels::ConvShape s{grad_out.batch, in_.channels, out_channels_,
                             in_.height,     in_.width,    filter_};
  kernels::omp::conv_backward_params(s, grad_out.data, input_.data, grad_weights_,
                                     grad_bias_);
  Tensor grad_in(grad_out.batch, in_);
  kernels::omp::conv_backward_input(s, grad_out.data, weights_, grad_in.data);
  return grad_in;
}

std::vector<ParamRef> ConvLayer::params() {
  return {{"weights", weights_, grad_weights_}, {"bias", bias_, grad_bias_}};
}

std::vector<StateRef> ConvLayer::state() {
  return {{"weights", &weights_}, {"bias", &bias_}};
}

// ---------------------------------------------------------------------------
// batch normalization

BatchNormLayer::BatchNormLayer(Shape shape, BatchNormSettings settings)
    : shape_(shape),
      settings_(settings),
      gamma_(shape.channels, 1.0),
      beta_(shape.channels, settings.center ? kInitialBias : 0.0),
      grad_gamma_(shape.channels, 0.0),
      grad_beta_(shape.channels, 0.0),
      running_mean_(shape.channels, 0.0),
      running_var_(shape.channels, 1.0) {
  if (!(settings.epsilon > 0.0)) throw std::invalid_argument("batchnorm epsilon <= 0");
  if (!(settings.momentum >= 0.0 && settings.momentum <= 1.0)) {
    throw std::invalid_argument("batchnorm momentum outside [0,1]");
  }
}

Tensor BatchNormLayer::forward(const Tensor& in, const ForwardContext& ctx) {
  check_input(in, shape_, "batchnorm");
  if (in.batch == 0) throw std::invalid_argument("batchnorm: empty batch");
  const std::size_t channels = shape_.channels;
  const std::size_t spatial = shape_.height * shape_.width;
  const double count = static_cast<double>(in.batch * spatial);
  Tensor out(in.batch, shape_);
  normalized_.assign(in.data.size(), 0.0);
  inv_std_.assign(channels, 0.0);
  batch_ = in.batch;
  used_batch_stats_ = ctx.training;

  for (std::size_t c = 0; c < channels; ++c) {
    double mean;
    double var;
    if (ctx.training) {
      double sum = 0.0;
      for (std::size_t n = 0; n < in.batch; ++n) {
        const double* x = &in.data[(n * channels + c) * spatial];
        for (std::size_t p = 0; p < spatial; ++p) sum += x[p];
      }
      mean = sum / count;
      double ss = 0.0;
      for (std::size_t n = 0; n < in.batch; ++n) {
        const double* x = &in.data[(n * channels + c) * spatial];
        for (std::size_t p = 0; p < spatial; ++p) ss += (x[p] - mean) * (x[p] - mean);
      }
      var = ss / count;
      running_mean_[c] =
          settings_.momentum * running_mean_[c] + (1.0 - settings_.momentum) * mean;
      running_var_[c] =
          settings_.momentum * running_var_[c] + (1.0 - settings_.momentum) * var;
    } else {
      mean = running_mean_[c];
      var = running_var_[c];
    }
    const double inv_std = 1.0 / std::sqrt(var + settings_.epsilon);
    inv_std_[c] = inv_std;
    const double g = settings_.scale ? gamma_[c] : 1.0;
    const double b = settings_.center ? beta_[c] : 0.0;
    for (std::size_t n = 0; n < in.batch; ++n) {
      const std::size_t base = (n * channels + c) * spatial;
      for (std::size_t p = 0; p < spatial; ++p) {
        const double xhat = (in.data[base + p] - mean) * inv_std;
        normalized_[base + p] = xhat;
        out.data[base + p] = g * xhat + b;
      }
    }
  }
  return out;
}

Tensor BatchNormLayer::backward(const Tensor& grad_out) {
  const std::size_t channels = shape_.channels;
  const std::size_t spatial = shape_.height * shape_.width;
  const double count = static_cast<double>(batch_ * spatial);
  Tensor grad_in(batch_, shape_);
  for (std::size_t c = 0; c < channels; ++c) {
    const double g = settings_.scale ? gamma_[c] : 1.0;
    double sum_dy = 0.0;
    double sum_dy_xhat = 0.0;
    for (std::size_t n = 0; n < batch_; ++n) {
      const std::size_t base = (n * channels + c) * spatial;
      for (std::size_t p = 0; p < spatial; ++p) {
        sum_dy += grad_out.data[base + p];
        sum_dy_xhat += grad_out.data[base + p] * normalized_[base + p];
      }
    }
    grad_gamma_[c] = settings_.scale ? sum_dy_xhat : 0.0;
    grad_beta_[c] = settings_.center ? sum_dy : 0.0;
    const double k = g * inv_std_[c];
    for (std::size_t n = 0; n < batch_; ++n) {
      const std::size_t base = (n * channels + c) * spatial;
      for (std::size_t p = 0; p < spatial; ++p) {
        const double dy = grad_out.data[base + p];
        grad_in.data[base + p] =
            used_batch_stats_
                ? k * (dy - sum_dy / count - normalized_[base + p] * sum_dy_xhat / count)
                : k * dy;
      }
    }
  }
  return grad_in;
}

std::vector<ParamRef> BatchNormLayer::params() {
  std::vector<ParamRef> out;
  if (settings_.scale) out.push_back({"gamma", gamma_, grad_gamma_});
  if (settings_.center) out.push_back({"beta", beta_, grad_beta_});
  return out;
}

std::vector<StateRef> BatchNormLayer::state() {
  return {{"gamma", &gamma_},
          {"beta", &beta_},
          {"running_mean", &running_mean_},
          {"running_var", &running_var_}};
}

// ---------------------------------------------------------------------------
// noise

Tensor GaussianNoiseLayer::forward(const Tensor& in, const ForwardContext& ctx) {
  if (!ctx.training || stddev_ == 0.0) return in;
  if (ctx.rng == nullptr) throw std::invalid_argument("noise layer needs an rng");
  Tensor out = in;
  std::normal_distribution<double> noise(0.0, stddev_);
  for (double& v : out.data) v += noise(*ctx.rng);
  return out;
}

// ---------------------------------------------------------------------------
// activation

ActivationLayer::ActivationLayer(Shape shape, ActivationKind kind, double sharpness)
    : shape_(shape), kind_(kind), sharpness_(sharpness) {
  check_sharpness(sharpness);
}

void ActivationLayer::set_sharpness(double s) {
  check_sharpness(s);
  sharpness_ = s;
}

Tensor ActivationLayer::forward(const Tensor& in, const ForwardContext& ctx) {
  Tensor out(in.batch, in.shape);
  for (std::size_t i = 0; i < in.data.size(); ++i) {
    out.data[i] = activation_forward(kind_, sharpness_, in.data[i]);
  }
  if (ctx.training) input_ = in;
  return out;
}

Tensor ActivationLayer::backward(const Tensor& grad_out) {
  Tensor grad_in(grad_out.batch, grad_out.shape);
  for (std::size_t i = 0; i < grad_out.data.size(); ++i) {
    grad_in.data[i] =
        grad_out.data[i] * activation_backward(kind_, sharpness_, input_.data[i]);
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// max pooling

MaxPoolLayer::MaxPoolLayer(Shape in) : in_(in) {
  if (in.height < 2 || in.width < 2) {
    throw std::invalid_argument("max pooling needs at least a 2x2 input");
  }
}

Tensor MaxPoolLayer::forward(const Tensor& in, const ForwardContext& ctx) {
  check_input(in, in_, "maxpool");
  const Shape os = output_shape();
  Tensor out(in.batch, os);
  if (ctx.training) argmax_.assign(out.data.size(), 0);
  batch_ = in.batch;
  for (std::size_t n = 0; n < in.batch; ++n) {
    for (std::size_t c = 0; c < in_.channels; ++c) {
      const std::size_t src = (n * in_.channels + c) * in_.height * in_.width;
      const std::size_t dst = (n * os.channels + c) * os.height * os.width;
      for (std::size_t y = 0; y < os.height; ++y) {
        for (std::size_t x = 0; x < os.width; ++x) {
          std::size_t best = src + (2 * y) * in_.width + 2 * x;
          for (std::size_t dy = 0; dy < 2; ++dy) {
            for (std::size_t dx = 0; dx < 2; ++dx) {
              const std::size_t idx = src + (2 * y + dy) * in_.width + 2 * x + dx;
              if (in.data[idx] > in.data[best]) best = idx;
            }
          }
          out.data[dst + y * os.width + x] = in.data[best];
          if (ctx.training) argmax_[dst + y * os.width + x] = best;
        }
      }
    }
  }
  return out;
}

Tensor MaxPoolLayer::backward(const Tensor& grad_out) {
  Tensor grad_in(batch_, in_);
  for (std::size_t i = 0; i < grad_out.data.size(); ++i) {
    grad_in.data[argmax_[i]] += grad_out.data[i];
  }
  return grad_in;
}

}  // namespace sharpsearch::whetstone
