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

#include "sharpsearch/whetstone/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sharpsearch::whetstone {

void SharpeningSchedule::validate() const {
  if (duration == 0) {
    throw std::invalid_argument("sharpening duration must be at least 1 epoch");
  }
}

std::vector<double> schedule_sharpness(const SharpeningSchedule& schedule,
                                       std::size_t epoch, std::size_t group_count) {
  schedule.validate();
  if (group_count == 0) throw std::invalid_argument("group_count must be >= 1");
  std::vector<double> s(group_count, 0.0);
  for (std::size_t g = 0; g < group_count; ++g) {
    const std::size_t start = schedule.group_start(g);
    if (epoch < start) continue;
    const double progress = static_cast<double>(epoch - start) /
                            static_cast<double>(schedule.duration);
    s[g] = std::min(progress, 1.0);
  }
  return s;
}

ScheduleVerdict validate_schedule(const SharpeningSchedule& schedule,
                                  std::size_t group_count,
                                  std::size_t total_epochs) {
  ScheduleVerdict verdict;
  for (std::size_t g = 0; g < group_count; ++g) {
    if (schedule.group_end(g) > total_epochs) {
      verdict.complete = false;
      verdict.first_unfinished_group = g;
      break;
    }
  }
  return verdict;
}

AdaptiveSharpener::AdaptiveSharpener(std::size_t group_count, std::size_t duration,
                                     double threshold)
    : sharpness_(group_count, 0.0), duration_(duration), threshold_(threshold) {
  if (duration == 0) throw std::invalid_argument("duration must be at least 1");
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
}

SharpenDecision AdaptiveSharpener::step(double latest_loss) {
  if (!std::isfinite(latest_loss)) {
    throw std::invalid_argument("adaptive sharpener needs a finite loss");
  }
  constexpr double kFloor = 1e-12;
  SharpenDecision decision = SharpenDecision::advance;
  if (previous_loss_) {
    const double prev = *previous_loss_;
    const double change = (latest_loss - prev) / std::max(prev, kFloor);
    if (change > threshold_) decision = SharpenDecision::pause;
  }
  previous_loss_ = latest_loss;
  if (decision == SharpenDecision::advance && !finished()) {
    ++steps_in_group_;
    if (steps_in_group_ >= duration_) {
      sharpness_[current_] = 1.0;
      ++current_;
      steps_in_group_ = 0;
    } else {
      sharpness_[current_] = static_cast<double>(steps_in_group_) /
                             static_cast<double>(duration_);
    }
  }
  return decision;
}

}  // namespace sharpsearch::whetstone
