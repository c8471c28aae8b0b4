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

// Block-structured network: each block is affine (conv or dense) ->
// optional batchnorm -> optional gaussian noise -> sharpenable activation ->
// optional 2x2 max-pool. Every block activation is one sharpening group.
// The readout (dense -> num_outputs, activation pinned at s = 0) feeds the
// population output key and is never sharpened.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sharpsearch/whetstone/layers.hpp"
#include "sharpsearch/whetstone/output_key.hpp"

namespace sharpsearch::whetstone {

enum class BlockType { conv, dense };

struct BlockSpec {
  BlockType type = BlockType::dense;
  std::size_t units = 1;   // conv: feature maps, dense: width
  std::size_t filter = 3;  // conv only, odd
  bool pool = false;       // conv only
  std::optional<BatchNormSettings> batchnorm;
  std::optional<double> noise_std;  // present -> noise layer inserted

  bool operator==(const BlockSpec&) const = default;
};

struct NetworkSpec {
  Shape input{1, 8, 8};
  std::vector<BlockSpec> blocks;
  ActivationKind activation = ActivationKind::bounded_relu;
  std::size_t num_classes = 10;
  std::size_t num_outputs = 100;
  std::size_t n_per_class = 10;
  bool overlap = false;

  void validate() const;
  bool operator==(const NetworkSpec&) const = default;
};

class Network {
 public:
  // rng drives weight init and the output key.
  Network(NetworkSpec spec, Rng& rng);
  // Rebuilds the layer stack with an explicit key (used by checkpoints).
  Network(NetworkSpec spec, OutputKey key, Rng& rng);

  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const NetworkSpec& spec() const { return spec_; }
  const OutputKey& key() const { return key_; }
  std::size_t group_count() const { return groups_.size(); }

  std::vector<double> sharpness() const;
  void set_sharpness(std::span<const double> s);

  // Output-neuron activations, batch x num_outputs.
  Tensor forward(const Tensor& in, const ForwardContext& ctx);
  // Backpropagates d loss / d outputs through the last training forward.
  void backward(const Tensor& grad_outputs);

  // Post-activation values of every sharpening group (inference mode).
  std::vector<Tensor> group_outputs(const Tensor& in);

  std::vector<std::size_t> predict(const Tensor& in);

  std::vector<ParamRef> params();
  std::vector<StateRef> state();

  std::size_t layer_count() const { return layers_.size(); }
  const Layer& layer(std::size_t i) const { return *layers_.at(i); }
  Layer& layer(std::size_t i) { return *layers_.at(i); }

 private:
  void build(Rng& rng);

  NetworkSpec spec_;
  OutputKey key_;
  std::vector<std::unique_ptr<Layer>> layers_;
  std::vector<std::size_t> groups_;  // indices of group activation layers
};

}  // namespace sharpsearch::whetstone
