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

// Layers of the miniature trainer. Tensors are NCHW batches of doubles; a
// dense feature vector is a tensor with height = width = 1.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sharpsearch/space.hpp"
#include "sharpsearch/whetstone/activation.hpp"

namespace sharpsearch::whetstone {

struct Shape {
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;

  std::size_t size() const { return channels * height * width; }
  bool operator==(const Shape&) const = default;
};

struct Tensor {
  std::size_t batch = 0;
  Shape shape;
  std::vector<double> data;

  Tensor() = default;
  Tensor(std::size_t batch, Shape shape)
      : batch(batch), shape(shape), data(batch * shape.size(), 0.0) {}

  std::span<double> sample(std::size_t i) {
    return std::span<double>(data).subspan(i * shape.size(), shape.size());
  }
  std::span<const double> sample(std::size_t i) const {
    return std::span<const double>(data).subspan(i * shape.size(), shape.size());
  }
};

// A learnable tensor and the gradient accumulated by the last backward().
struct ParamRef {
  std::string name;
  std::span<double> values;
  std::span<double> grads;
};

// Named buffer stored in checkpoints (parameters and running statistics).
struct StateRef {
  std::string name;
  std::vector<double>* values;
};

struct ForwardContext {
  bool training = false;
  Rng* rng = nullptr;  // required by noise layers in training mode
};

class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string kind() const = 0;
  virtual Shape output_shape() const = 0;
  virtual Tensor forward(const Tensor& in, const ForwardContext& ctx) = 0;
  // Gradient w.r.t. the input of the last forward(); fills parameter grads.
  virtual Tensor backward(const Tensor& grad_out) = 0;
  virtual std::vector<ParamRef> params() { return {}; }
  virtual std::vector<StateRef> state() { return {}; }
  virtual std::unique_ptr<Layer> clone() const = 0;
};

class DenseLayer final : public Layer {
 public:
  DenseLayer(std::size_t in, std::size_t out, Rng& rng);
  std::string kind() const override { return "dense"; }
  Shape output_shape() const override { return {out_, 1, 1}; }
  Tensor forward(const Tensor& in, const ForwardContext& ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamRef> params() override;
  std::vector<StateRef> state() override;
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<DenseLayer>(*this);
  }

  std::vector<double>& weights() { return weights_; }
  std::vector<double>& bias() { return bias_; }

 private:
  std::size_t in_;
  std::size_t out_;
  std::vector<double> weights_;  // [out][in]
  std::vector<double> bias_;
  std::vector<double> grad_weights_;
  std::vector<double> grad_bias_;
  Tensor input_;
};

// Stride-1, same-padded 2-D convolution with an odd square filter.
class ConvLayer final : public Layer {
 public:
  ConvLayer(Shape in, std::size_t out_channels, std::size_t filter, Rng& rng);
  std::string kind() const override { return "conv"; }
  Shape output_shape() const override {
    return {out_channels_, in_.height, in_.width};
  }
  Tensor forward(const Tensor& in, const ForwardContext& ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamRef> params() override;
  std::vector<StateRef> state() override;
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<ConvLayer>(*this);
  }

  std::vector<double>& weights() { return weights_; }
  std::vector<double>& bias() { return bias_; }

 private:
  Shape in_;
  std::size_t out_channels_;
  std::size_t filter_;
  std::vector<double> weights_;  // [out][in][f][f]
  std::vector<double> bias_;
  std::vector<double> grad_weights_;
  std::vector<double> grad_bias_;
  Tensor input_;
};

struct BatchNormSettings {
  double momentum = 0.95;
  double epsilon = 1e-3;
  bool center = true;
  bool scale = true;
  bool operator==(const BatchNormSettings&) const = default;
};

// Per-channel normalization. Training uses batch statistics (biased
// variance) and updates running <- momentum * running + (1 - momentum) * batch.
class BatchNormLayer final : public Layer {
 public:
  BatchNormLayer(Shape shape, BatchNormSettings settings);
  std::string kind() const override { return "batchnorm"; }
  Shape output_shape() const override { return shape_; }
  Tensor forward(const Tensor& in, const ForwardContext& ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  std::vector<ParamRef> params() override;
  std::vector<StateRef> state() override;
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<BatchNormLayer>(*this);
  }

  const BatchNormSettings& settings() const { return settings_; }
  std::vector<double>& gamma() { return gamma_; }
  std::vector<double>& beta() { return beta_; }
  std::vector<double>& running_mean() { return running_mean_; }
  std::vector<double>& running_var() { return running_var_; }

 private:
  Shape shape_;
  BatchNormSettings settings_;
  std::vector<double> gamma_;
  std::vector<double> beta_;
  std::vector<double> grad_gamma_;
  std::vector<double> grad_beta_;
  std::vector<double> running_mean_;
  std::vector<double> running_var_;
  // cache from the last training forward
  std::vector<double> normalized_;
  std::vector<double> inv_std_;
  std::size_t batch_ = 0;
  bool used_batch_stats_ = false;
};

// Adds N(0, stddev^2) noise in training mode; identity otherwise.
class GaussianNoiseLayer final : public Layer {
 public:
  GaussianNoiseLayer(Shape shape, double stddev) : shape_(shape), stddev_(stddev) {}
  std::string kind() const override { return "noise"; }
  Shape output_shape() const override { return shape_; }
  Tensor forward(const Tensor& in, const ForwardContext& ctx) override;
  Tensor backward(const Tensor& grad_out) override { return grad_out; }
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<GaussianNoiseLayer>(*this);
  }
  double stddev() const { return stddev_; }

 private:
  Shape shape_;
  double stddev_;
};

class ActivationLayer final : public Layer {
 public:
  ActivationLayer(Shape shape, ActivationKind kind, double sharpness = 0.0);
  std::string kind() const override { return "activation"; }
  Shape output_shape() const override { return shape_; }
  Tensor forward(const Tensor& in, const ForwardContext& ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<ActivationLayer>(*this);
  }

  ActivationKind activation() const { return kind_; }
  double sharpness() const { return sharpness_; }
  void set_sharpness(double s);

 private:
  Shape shape_;
  ActivationKind kind_;
  double sharpness_;
  Tensor input_;
};

// 2x2 max pooling with stride 2; odd trailing rows/columns are dropped.
class MaxPoolLayer final : public Layer {
 public:
  explicit MaxPoolLayer(Shape in);
  std::string kind() const override { return "maxpool"; }
  Shape output_shape() const override {
    return {in_.channels, in_.height / 2, in_.width / 2};
  }
  Tensor forward(const Tensor& in, const ForwardContext& ctx) override;
  Tensor backward(const Tensor& grad_out) override;
  std::unique_ptr<Layer> clone() const override {
    return std::make_unique<MaxPoolLayer>(*this);
  }

 private:
  Shape in_;
  std::vector<std::size_t> argmax_;
  std::size_t batch_ = 0;
};

}  // namespace sharpsearch::whetstone
