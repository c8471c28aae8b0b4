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

#include "sharpsearch/whetstone/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sharpsearch::whetstone {

namespace {

constexpr std::size_t kEvalBatch = 256;

template <typename Fn>
void for_each_chunk(const LabeledData& data, Fn&& fn) {
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < data.size(); start += kEvalBatch) {
    const std::size_t end = std::min(data.size(), start + kEvalBatch);
    rows.resize(end - start);
    std::iota(rows.begin(), rows.end(), start);
    fn(rows);
  }
}

}  // namespace

Tensor LabeledData::batch(std::span<const std::size_t> rows) const {
  const std::size_t d = shape.size();
  Tensor t(rows.size(), shape);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(rows[i] * d), d,
                t.data.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  return t;
}

Tensor LabeledData::all() const {
  std::vector<std::size_t> rows(size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return batch(rows);
}

void TrainOptions::validate() const {
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
  optimizer.validate();
  schedule.validate();
  if (!(adaptive_threshold >= 0.0)) {
    throw std::invalid_argument("adaptive threshold must be non-negative");
  }
}

double accuracy(Network& net, const LabeledData& data) {
  if (data.size() == 0) return 0.0;
  std::size_t correct = 0;
  for_each_chunk(data, [&](std::span<const std::size_t> rows) {
    const auto pred = net.predict(data.batch(rows));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      correct += pred[i] == data.y[rows[i]] ? 1 : 0;
    }
  });
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double binarized_accuracy(Network& net, const LabeledData& data) {
  const std::vector<double> saved = net.sharpness();
  const std::vector<double> sharp(saved.size(), 1.0);
  net.set_sharpness(sharp);
  const double acc = accuracy(net, data);
  net.set_sharpness(saved);
  return acc;
}

double dead_neuron_fraction(Network& net, const LabeledData& probe) {
  if (probe.size() == 0) throw std::invalid_argument("empty probe set");
  std::vector<std::vector<bool>> alive;
  for_each_chunk(probe, [&](std::span<const std::size_t> rows) {
    const auto groups = net.group_outputs(probe.batch(rows));
    if (alive.empty()) {
      for (const auto& g : groups) alive.emplace_back(g.shape.size(), false);
    }
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const Tensor& t = groups[k];
      for (std::size_t i = 0; i < t.batch; ++i) {
        const auto s = t.sample(i);
        for (std::size_t u = 0; u < s.size(); ++u) {
          if (s[u] != 0.0) alive[k][u] = true;
        }
      }
    }
  });
  std::size_t total = 0, dead = 0;
  for (const auto& layer : alive) {
    total += layer.size();
    dead += static_cast<std::size_t>(std::count(layer.begin(), layer.end(), false));
  }
  return total == 0 ? 0.0 : static_cast<double>(dead) / static_cast<double>(total);
}

TrainResult train(Network& net, const LabeledData& train_set,
                  const LabeledData& val_set, const LabeledData* test_set,
                  const TrainOptions& options, Rng& rng) {
  options.validate();
  if (train_set.size() == 0) throw std::invalid_argument("empty training set");
  if (train_set.shape.size() != net.spec().input.size()) {
    throw std::invalid_argument("dataset shape does not match the network input");
  }
  const std::size_t groups = net.group_count();
  OptimizerState optimizer(options.optimizer);
  AdaptiveSharpener adaptive(groups, options.schedule.duration,
                             options.adaptive_threshold);
  auto current_sharpness = [&](std::size_t epoch) {
    if (options.sharpener == SharpenerKind::scheduled) {
      return schedule_sharpness(options.schedule, epoch, groups);
    }
    return adaptive.sharpness();
  };

  TrainResult result;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const ForwardContext ctx{true, &rng};

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    const std::vector<double> s = current_sharpness(epoch);
    net.set_sharpness(s);
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
      const std::size_t end = std::min(order.size(), start + options.batch_size);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const Tensor out = net.forward(train_set.batch(rows), ctx);
      Tensor grad(out.batch, out.shape);
      const double inv_batch = 1.0 / static_cast<double>(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto l = net.key().loss(out.sample(i), train_set.y[rows[i]]);
        loss_sum += l.loss;
        auto g = grad.sample(i);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] = l.grad[k] * inv_batch;
      }
      if (!std::isfinite(loss_sum)) break;
      net.backward(grad);
      const auto params = net.params();
      optimizer.step(params);
    }
    const double epoch_loss = loss_sum / static_cast<double>(train_set.size());
    if (!std::isfinite(epoch_loss)) {
      result.failed = true;
      break;
    }
    bool params_finite = true;
    for (const auto& p : net.params()) {
      for (double v : p.values) params_finite = params_finite && std::isfinite(v);
    }
    if (!params_finite) {
      result.failed = true;
      break;
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = epoch_loss;
    rec.val_accuracy = accuracy(net, val_set);
    if (test_set != nullptr) rec.test_accuracy = accuracy(net, *test_set);
    rec.sharpness = s;
    result.history.push_back(std::move(rec));

    if (options.sharpener == SharpenerKind::adaptive &&
        epoch + 1 >= options.schedule.start_epoch && !adaptive.finished()) {
      adaptive.step(epoch_loss);
    }
  }

  if (!result.failed) net.set_sharpness(current_sharpness(options.epochs));
  result.final_sharpness = net.sharpness();
  result.val_accuracy = accuracy(net, val_set);
  result.binarized_val_accuracy = binarized_accuracy(net, val_set);
  if (test_set != nullptr) {
    result.test_accuracy = accuracy(net, *test_set);
    result.binarized_test_accuracy = binarized_accuracy(net, *test_set);
  }
  return result;
}

}  // namespace sharpsearch::whetstone
