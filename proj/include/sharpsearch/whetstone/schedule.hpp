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

namespace sharpsearch::whetstone {

// Layer-by-layer sharpening timeline. Epochs are 0-based; group g (input to
// output order) sharpens linearly over [start(g), start(g) + duration) with
// start(g) = start_epoch + g * (duration + intermission).
struct SharpeningSchedule {
  std::size_t start_epoch = 0;
  std::size_t duration = 1;
  std::size_t intermission = 0;

  void validate() const;  // duration >= 1
  std::size_t group_start(std::size_t group) const {
    return start_epoch + group * (duration + intermission);
  }
  std::size_t group_end(std::size_t group) const {
    return group_start(group) + duration;
  }
  bool operator==(const SharpeningSchedule&) const = default;
};

// s_g(epoch) = clamp((epoch - start(g)) / duration, 0, 1) for each group.
std::vector<double> schedule_sharpness(const SharpeningSchedule& schedule,
                                       std::size_t epoch, std::size_t group_count);

struct ScheduleVerdict {
  bool complete = true;
  // First group that cannot reach s = 1 within the epoch budget.
  std::optional<std::size_t> first_unfinished_group;
};

ScheduleVerdict validate_schedule(const SharpeningSchedule& schedule,
                                  std::size_t group_count,
                                  std::size_t total_epochs);

enum class SharpenDecision { advance, pause };

// Loss-monitoring sharpener: after each epoch it advances the current group
// by 1/duration unless the training loss rose by more than `threshold`
// relative to the previous epoch.
class AdaptiveSharpener {
 public:
  AdaptiveSharpener(std::size_t group_count, std::size_t duration,
                    double threshold = 0.05);

  SharpenDecision step(double latest_loss);

  const std::vector<double>& sharpness() const { return sharpness_; }
  std::size_t current_group() const { return current_; }
  bool finished() const { return current_ >= sharpness_.size(); }
  double threshold() const { return threshold_; }

 private:
  std::vector<double> sharpness_;
  std::size_t duration_;
  double threshold_;
  std::size_t current_ = 0;
  std::size_t steps_in_group_ = 0;
  std::optional<double> previous_loss_;
};

}  // namespace sharpsearch::whetstone
