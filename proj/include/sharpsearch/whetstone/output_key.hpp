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

// n-hot population readout: each class owns a set of output neurons, the
// class logit is the mean of those neurons, and the loss is softmax
// cross-entropy over the class logits.

#include <cstddef>
#include <span>
#include <vector>

#include "sharpsearch/space.hpp"

namespace sharpsearch::whetstone {

class OutputKey {
 public:
  OutputKey() = default;
  // Every class needs the same non-zero number of distinct, in-range neurons.
  OutputKey(std::vector<std::vector<std::size_t>> assignment,
            std::size_t num_outputs);

  // Without overlap the classes receive disjoint sets from a seeded
  // permutation; with overlap each class draws its set independently.
  static OutputKey make(std::size_t num_classes, std::size_t num_outputs,
                        std::size_t n_per_class, bool overlap, Rng& rng);

  std::size_t num_classes() const { return assignment_.size(); }
  std::size_t num_outputs() const { return num_outputs_; }
  std::size_t n_per_class() const {
    return assignment_.empty() ? 0 : assignment_.front().size();
  }
  const std::vector<std::size_t>& members(std::size_t cls) const {
    return assignment_.at(cls);
  }
  const std::vector<std::vector<std::size_t>>& assignment() const {
    return assignment_;
  }

  std::vector<double> logits(std::span<const double> outputs) const;

  struct Loss {
    double loss = 0.0;
    std::vector<double> grad;  // d loss / d outputs
  };
  Loss loss(std::span<const double> outputs, std::size_t label) const;

  std::size_t predict(std::span<const double> outputs) const;

  bool operator==(const OutputKey&) const = default;

 private:
  std::vector<std::vector<std::size_t>> assignment_;
  std::size_t num_outputs_ = 0;
};

std::vector<double> softmax(std::span<const double> logits);

}  // namespace sharpsearch::whetstone
