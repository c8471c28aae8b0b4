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

#include "sharpsearch/whetstone/output_key.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace sharpsearch::whetstone {

OutputKey::OutputKey(std::vector<std::vector<std::size_t>> assignment,
                     std::size_t num_outputs)
    : assignment_(std::move(assignment)), num_outputs_(num_outputs) {
  if (assignment_.empty()) throw std::invalid_argument("output key has no classes");
  const std::size_t n = assignment_.front().size();
  for (const auto& members : assignment_) {
    if (members.empty()) throw std::invalid_argument("class with no output neurons");
    if (members.size() != n) {
      throw std::invalid_argument("every class needs the same number of neurons");
    }
    std::set<std::size_t> distinct(members.begin(), members.end());
    if (distinct.size() != members.size() || *distinct.rbegin() >= num_outputs) {
      throw std::invalid_argument("class neurons must be distinct and in range");
    }
  }
}

OutputKey OutputKey::make(std::size_t num_classes, std::size_t num_outputs,
                          std::size_t n_per_class, bool overlap, Rng& rng) {
  if (num_classes == 0 || n_per_class == 0 || n_per_class > num_outputs) {
    throw std::invalid_argument("infeasible output key sizes");
  }
  if (!overlap && num_classes * n_per_class > num_outputs) {
    throw std::invalid_argument(
        "infeasible output key: classes * n_per_class exceeds outputs");
  }
  std::vector<std::vector<std::size_t>> assignment(num_classes);
  std::vector<std::size_t> perm(num_outputs);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  if (!overlap) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t c = 0; c < num_classes; ++c) {
      assignment[c].assign(perm.begin() + static_cast<std::ptrdiff_t>(c * n_per_class),
                           perm.begin() +
                               static_cast<std::ptrdiff_t>((c + 1) * n_per_class));
      std::sort(assignment[c].begin(), assignment[c].end());
    }
  } else {
    for (std::size_t c = 0; c < num_classes; ++c) {
      std::shuffle(perm.begin(), perm.end(), rng);
      assignment[c].assign(perm.begin(),
                           perm.begin() + static_cast<std::ptrdiff_t>(n_per_class));
      std::sort(assignment[c].begin(), assignment[c].end());
    }
  }
  return OutputKey(std::move(assignment), num_outputs);
}

std::vector<double> OutputKey::logits(std::span<const double> outputs) const {
  if (outputs.size() != num_outputs_) {
    throw std::invalid_argument("population readout: output size mismatch");
  }
  std::vector<double> out(assignment_.size());
  for (std::size_t c = 0; c < assignment_.size(); ++c) {
    double acc = 0.0;
    for (std::size_t i : assignment_[c]) acc += outputs[i];
    out[c] = acc / static_cast<double>(assignment_[c].size());
  }
  return out;
}

OutputKey::Loss OutputKey::loss(std::span<const double> outputs,
                                std::size_t label) const {
  if (label >= assignment_.size()) throw std::invalid_argument("label out of range");
  const auto probs = softmax(logits(outputs));
  Loss result;
  result.loss = -std::log(std::max(probs[label], 1e-300));
  result.grad.assign(num_outputs_, 0.0);
  for (std::size_t c = 0; c < assignment_.size(); ++c) {
    const double dlogit = probs[c] - (c == label ? 1.0 : 0.0);
    const double share = dlogit / static_cast<double>(assignment_[c].size());
    for (std::size_t i : assignment_[c]) result.grad[i] += share;
  }
  return result;
}

std::size_t OutputKey::predict(std::span<const double> outputs) const {
  const auto l = logits(outputs);
  return static_cast<std::size_t>(std::max_element(l.begin(), l.end()) - l.begin());
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - m);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

}  // namespace sharpsearch::whetstone
