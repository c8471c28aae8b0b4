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

#include <cstddef>
#include <optional>
#include <vector>

#include "sharpsearch/whetstone/network.hpp"
#include "sharpsearch/whetstone/optimizers.hpp"
#include "sharpsearch/whetstone/schedule.hpp"

namespace sharpsearch::whetstone {

// Row-major samples, each `shape.size()` values in [0,1].
struct LabeledData {
  Shape shape{1, 8, 8};
  std::vector<double> x;
  std::vector<std::size_t> y;

  std::size_t size() const { return y.size(); }
  Tensor batch(std::span<const std::size_t> rows) const;
  Tensor all() const;
};

enum class SharpenerKind { scheduled, adaptive };

struct TrainOptions {
  std::size_t epochs = 40;
  std::size_t batch_size = 64;
  OptimizerSettings optimizer;
  SharpenerKind sharpener = SharpenerKind::scheduled;
  // Scheduled: the full timeline. Adaptive: sharpening starts after epoch
  // start_epoch and advances by 1/duration per accepted epoch.
  SharpeningSchedule schedule{25, 5, 0};
  double adaptive_threshold = 0.05;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;  // mean training loss over the epoch
  double val_accuracy = 0.0;
  std::optional<double> test_accuracy;
  std::vector<double> sharpness;  // in effect during this epoch
};

struct TrainResult {
  std::vector<EpochRecord> history;
  bool failed = false;  // non-finite loss; history holds the epochs before it
  std::vector<double> final_sharpness;
  double val_accuracy = 0.0;
  std::optional<double> test_accuracy;
  // Same network with every group forced to s = 1.
  double binarized_val_accuracy = 0.0;
  std::optional<double> binarized_test_accuracy;
};

double accuracy(Network& net, const LabeledData& data);
// Accuracy with every sharpening group at s = 1; sharpness is restored.
double binarized_accuracy(Network& net, const LabeledData& data);

// Fraction of group-activation units that output exactly 0 on every probe.
double dead_neuron_fraction(Network& net, const LabeledData& probe);

// Trains in place. Sharpness during epoch e follows the sharpener; after the
// last epoch the network is left at the sharpness reached by epoch `epochs`
// (so a schedule that validate_schedule() calls complete ends fully sharp).
TrainResult train(Network& net, const LabeledData& train_set,
                  const LabeledData& val_set, const LabeledData* test_set,
                  const TrainOptions& options, Rng& rng);

}  // namespace sharpsearch::whetstone
