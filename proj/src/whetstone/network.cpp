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

#include "sharpsearch/whetstone/network.hpp"

#include <stdexcept>

namespace sharpsearch::whetstone {

void NetworkSpec::validate() const {
  if (input.size() == 0) throw std::invalid_argument("network input is empty");
  if (blocks.empty()) throw std::invalid_argument("network needs at least one block");
  Shape shape = input;
  bool flat = false;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const BlockSpec& block = blocks[b];
    if (block.units == 0) throw std::invalid_argument("block with zero units");
    if (block.noise_std && !(*block.noise_std >= 0.0)) {
      throw std::invalid_argument("noise std must be non-negative");
    }
    if (block.type == BlockType::conv) {
      if (flat) throw std::invalid_argument("conv block after a dense block");
      if (block.filter == 0 || block.filter % 2 == 0) {
        throw std::invalid_argument("conv filter size must be odd");
      }
      shape = {block.units, shape.height, shape.width};
      if (block.pool) {
        if (shape.height < 2 || shape.width < 2) {
          throw std::invalid_argument("max-pool on a map smaller than 2x2");
        }
        shape = {shape.channels, shape.height / 2, shape.width / 2};
      }
    } else {
      if (block.pool) throw std::invalid_argument("pooling after a dense block");
      flat = true;
      shape = {block.units, 1, 1};
    }
  }
  if (num_classes == 0 || n_per_class == 0 || num_outputs == 0) {
    throw std::invalid_argument("empty population readout");
  }
  if (n_per_class > num_outputs ||
      (!overlap && num_classes * n_per_class > num_outputs)) {
    throw std::invalid_argument("output key does not fit in num_outputs");
  }
}

Network::Network(NetworkSpec spec, Rng& rng) : spec_(std::move(spec)) {
  spec_.validate();
  build(rng);
  key_ = OutputKey::make(spec_.num_classes, spec_.num_outputs, spec_.n_per_class,
                         spec_.overlap, rng);
}

Network::Network(NetworkSpec spec, OutputKey key, Rng& rng)
    : spec_(std::move(spec)), key_(std::move(key)) {
  spec_.validate();
  if (key_.num_classes() != spec_.num_classes ||
      key_.num_outputs() != spec_.num_outputs ||
      key_.n_per_class() != spec_.n_per_class) {
    throw std::invalid_argument("output key does not match the network spec");
  }
  build(rng);
}

Network::Network(const Network& other)
    : spec_(other.spec_), key_(other.key_), groups_(other.groups_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Network& Network::operator=(const Network& other) {
  if (this != &other) {
    Network copy(other);
    *this = std::move(copy);
  }
  return *this;
}

void Network::build(Rng& rng) {
  layers_.clear();
  groups_.clear();
  Shape shape = spec_.input;
  for (const BlockSpec& block : spec_.blocks) {
    if (block.type == BlockType::conv) {
      layers_.push_back(std::make_unique<ConvLayer>(shape, block.units, block.filter, rng));
    } else {
      layers_.push_back(std::make_unique<DenseLayer>(shape.size(), block.units, rng));
    }
    shape = layers_.back()->output_shape();
    if (block.batchnorm) {
      layers_.push_back(std::make_unique<BatchNormLayer>(shape, *block.batchnorm));
    }
    if (block.noise_std) {
      layers_.push_back(std::make_unique<GaussianNoiseLayer>(shape, *block.noise_std));
    }
    layers_.push_back(std::make_unique<ActivationLayer>(shape, spec_.activation));
    groups_.push_back(layers_.size() - 1);
    if (block.pool) {
      layers_.push_back(std::make_unique<MaxPoolLayer>(shape));
      shape = layers_.back()->output_shape();
    }
  }
  layers_.push_back(std::make_unique<DenseLayer>(shape.size(), spec_.num_outputs, rng));
  layers_.push_back(std::make_unique<ActivationLayer>(Shape{spec_.num_outputs, 1, 1},
                                                      spec_.activation));
}

std::vector<double> Network::sharpness() const {
  std::vector<double> s;
  s.reserve(groups_.size());
  for (std::size_t idx : groups_) {
    s.push_back(static_cast<const ActivationLayer&>(*layers_[idx]).sharpness());
  }
  return s;
}

void Network::set_sharpness(std::span<const double> s) {
  if (s.size() != groups_.size()) {
    throw std::invalid_argument("sharpness vector length != group count");
  }
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    static_cast<ActivationLayer&>(*layers_[groups_[g]]).set_sharpness(s[g]);
  }
}

Tensor Network::forward(const Tensor& in, const ForwardContext& ctx) {
  if (in.shape.size() != spec_.input.size()) {
    throw std::invalid_argument("network input size mismatch");
  }
  Tensor x = in;
  x.shape = spec_.input;
  for (auto& layer : layers_) x = layer->forward(x, ctx);
  return x;
}

void Network::backward(const Tensor& grad_outputs) {
  Tensor g = grad_outputs;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
}

std::vector<Tensor> Network::group_outputs(const Tensor& in) {
  Tensor x = in;
  x.shape = spec_.input;
  std::vector<Tensor> out;
  const ForwardContext ctx{};
  std::size_t next = 0;
  for (std::size_t i = 0; i < layers_.size() && next < groups_.size(); ++i) {
    x = layers_[i]->forward(x, ctx);
    if (i == groups_[next]) {
      out.push_back(x);
      ++next;
    }
  }
  return out;
}

std::vector<std::size_t> Network::predict(const Tensor& in) {
  const Tensor out = forward(in, ForwardContext{});
  std::vector<std::size_t> labels(out.batch);
  for (std::size_t i = 0; i < out.batch; ++i) labels[i] = key_.predict(out.sample(i));
  return labels;
}

std::vector<ParamRef> Network::params() {
  std::vector<ParamRef> all;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    for (auto& p : layers_[i]->params()) {
      p.name = std::to_string(i) + "." + p.name;
      all.push_back(p);
    }
  }
  return all;
}

std::vector<StateRef> Network::state() {
  std::vector<StateRef> all;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    for (auto& s : layers_[i]->state()) {
      s.name = std::to_string(i) + "." + s.name;
      all.push_back(s);
    }
  }
  return all;
}

}  // namespace sharpsearch::whetstone
