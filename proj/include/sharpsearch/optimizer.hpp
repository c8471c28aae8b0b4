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

// Sequential Bayesian optimization (ask/tell) and the exhaustive grid
// baseline. Maximization throughout.

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sharpsearch/acquisition.hpp"
#include "sharpsearch/runlog.hpp"
#include "sharpsearch/space.hpp"
#include "sharpsearch/surrogate.hpp"

namespace sharpsearch {

struct EvalOutcome {
  double value = 0.0;
  // A failed evaluation is logged with value 0 and the run continues.
  bool failed = false;
  std::map<std::string, double> aux;
};

// Must be reentrant: the grid baseline may call it from several threads.
// Throwing ObjectiveError aborts the run; any other std::exception is
// recorded as a failed evaluation.
using Objective =
    std::function<EvalOutcome(const Configuration& config, std::uint64_t seed)>;

struct LoopConfig {
  std::size_t n_init = 2;
  std::size_t n_iter = 15;
  Acquisition acquisition = Acquisition::ei(0.01);
  std::size_t candidate_limit = 4096;
  std::uint64_t seed = 0;
  KernelGrid kernel_grid;
  FitOptions fit;

  void validate() const;
};

struct Proposal {
  Configuration config;
  double score = 0.0;
  Prediction prediction;
};

// Candidate configurations for one proposal, in generation order: the full
// enumeration when the space has at most `candidate_limit` points, otherwise
// `candidate_limit` uniform samples followed by every single-hyperparameter
// perturbation of the three best evaluated configurations. Duplicates and
// evaluated configurations are removed, keeping first occurrences.
std::vector<Configuration> candidate_set(const SearchSpace& space,
                                         std::span<const Configuration> evaluated,
                                         std::span<const double> values,
                                         std::size_t candidate_limit, Rng& rng);

// Argmax of the acquisition over candidate_set(); earliest candidate wins
// ties. Throws ExhaustedSpace when nothing is left to evaluate.
Proposal propose_next(const GpModel& model, const SearchSpace& space,
                      const Acquisition& acquisition,
                      std::span<const Configuration> evaluated,
                      std::span<const double> values,
                      std::size_t candidate_limit, Rng& rng);

// Uniform sample that has not been evaluated yet.
Configuration propose_random(const SearchSpace& space,
                             std::span<const Configuration> evaluated, Rng& rng);

RunLog run_bayesian(const SearchSpace& space, const Objective& objective,
                    const LoopConfig& config);

// Evaluates every configuration in enumeration order (possibly concurrently)
// and returns the records in that order. Throws CardinalityExceeded.
RunLog run_grid(const SearchSpace& space, const Objective& objective,
                std::uint64_t limit, std::uint64_t seed = 0);

}  // namespace sharpsearch
