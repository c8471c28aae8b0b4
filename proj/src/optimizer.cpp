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

#include "sharpsearch/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "sharpsearch/errors.hpp"
#include "sharpsearch/parallel.hpp"

namespace sharpsearch {

namespace {

using ConfigSet = std::unordered_set<Configuration, ConfigurationHash>;

constexpr std::size_t kIncumbents = 3;
constexpr std::size_t kRejectionTries = 1000;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

RunRecord evaluate_one(const Objective& objective, const Configuration& config,
                       std::uint64_t seed) {
  RunRecord record;
  record.config = config;
  record.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    EvalOutcome outcome = objective(config, seed);
    record.failed = outcome.failed || !std::isfinite(outcome.value);
    record.value = record.failed ? 0.0 : outcome.value;
    record.aux = std::move(outcome.aux);
  } catch (const ObjectiveError&) {
    throw;
  } catch (const std::exception&) {
    record.failed = true;
    record.value = 0.0;
  }
  record.wall_time = seconds_since(start);
  return record;
}

}  // namespace

void LoopConfig::validate() const {
  if (n_init < 1) throw std::invalid_argument("n_init must be at least 1");
  if (n_iter < n_init) throw std::invalid_argument("n_iter must be >= n_init");
  if (candidate_limit < 1) {
    throw std::invalid_argument("candidate_limit must be at least 1");
  }
  acquisition.validate();
}

std::vector<Configuration> candidate_set(const SearchSpace& space,
                                         std::span<const Configuration> evaluated,
                                         std::span<const double> values,
                                         std::size_t candidate_limit, Rng& rng) {
  const ConfigSet done(evaluated.begin(), evaluated.end());
  ConfigSet seen;
  std::vector<Configuration> out;
  auto offer = [&](Configuration c) {
    if (done.contains(c) || seen.contains(c)) return;
    seen.insert(c);
    out.push_back(std::move(c));
  };

  std::uint64_t cardinality = 0;
  bool small = false;
  try {
    cardinality = space.cardinality();
    small = cardinality <= candidate_limit;
  } catch (const CardinalityOverflow&) {
    small = false;
  }
  if (small) {
    ConfigurationStream stream(space);
    while (auto c = stream.next()) offer(std::move(*c));
    return out;
  }

  for (std::size_t i = 0; i < candidate_limit; ++i) offer(space.sample_uniform(rng));

  std::vector<std::size_t> order(evaluated.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  for (std::size_t k = 0; k < std::min(kIncumbents, order.size()); ++k) {
    const Configuration& base = evaluated[order[k]];
    for (std::size_t s = 0; s < space.size(); ++s) {
      for (std::uint32_t o = 0; o < space.spec(s).size(); ++o) {
        if (o != base[s]) offer(base.with(s, o));
      }
    }
  }
  return out;
}

Proposal propose_next(const GpModel& model, const SearchSpace& space,
                      const Acquisition& acquisition,
                      std::span<const Configuration> evaluated,
                      std::span<const double> values,
                      std::size_t candidate_limit, Rng& rng) {
  if (evaluated.size() != values.size()) {
    throw std::invalid_argument("propose_next: evaluated/values size mismatch");
  }
  acquisition.validate();
  auto candidates = candidate_set(space, evaluated, values, candidate_limit, rng);
  if (candidates.empty()) {
    // Large spaces: random draws can miss the few unevaluated points.
    try {
      if (evaluated.size() >= space.cardinality()) throw ExhaustedSpace();
    } catch (const CardinalityOverflow&) {
    }
    candidates.push_back(propose_random(space, evaluated, rng));
  }

  const std::size_t dim = space.encoded_dimension();
  std::vector<double> queries;
  queries.reserve(candidates.size() * dim);
  for (const auto& c : candidates) {
    const auto p = space.encode(c);
    queries.insert(queries.end(), p.begin(), p.end());
  }
  const auto predictions = model.predict_many(queries);
  const double best = values.empty()
                          ? -std::numeric_limits<double>::infinity()
                          : *std::max_element(values.begin(), values.end());

  std::vector<double> scores(candidates.size());
  const auto count = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    scores[static_cast<std::size_t>(i)] =
        acquisition.score(predictions[static_cast<std::size_t>(i)], best);
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[arg]) arg = i;
  }
  return {candidates[arg], scores[arg], predictions[arg]};
}

Configuration propose_random(const SearchSpace& space,
                             std::span<const Configuration> evaluated, Rng& rng) {
  const ConfigSet done(evaluated.begin(), evaluated.end());
  for (std::size_t t = 0; t < kRejectionTries; ++t) {
    Configuration c = space.sample_uniform(rng);
    if (!done.contains(c)) return c;
  }
  // Nearly exhausted small space: pick uniformly among what is left.
  std::vector<Configuration> left;
  ConfigurationStream stream(space);
  while (auto c = stream.next()) {
    if (!done.contains(*c)) left.push_back(std::move(*c));
  }
  if (left.empty()) throw ExhaustedSpace();
  std::uniform_int_distribution<std::size_t> pick(0, left.size() - 1);
  return left[pick(rng)];
}

RunLog run_bayesian(const SearchSpace& space, const Objective& objective,
                    const LoopConfig& config) {
  config.validate();
  Rng rng(config.seed);
  RunLog log(space);
  std::vector<Configuration> evaluated;
  std::vector<double> values;
  std::vector<Observation> observations;

  for (std::size_t it = 1; it <= config.n_iter; ++it) {
    Configuration next;
    Phase phase;
    if (it <= config.n_init) {
      next = propose_random(space, evaluated, rng);
      phase = Phase::init;
    } else {
      const KernelParams kernel =
          tune_kernel(observations, config.kernel_grid, config.fit);
      const GpModel model = fit(observations, kernel, config.fit);
      next = propose_next(model, space, config.acquisition, evaluated, values,
                          config.candidate_limit, rng)
                 .config;
      phase = Phase::bayes;
    }
    RunRecord record = evaluate_one(objective, next, config.seed);
    record.iteration = it;
    record.phase = phase;
    evaluated.push_back(next);
    values.push_back(record.value);
    observations.push_back({space.encode(next), record.value});
    log.append(std::move(record));
  }
  return log;
}

RunLog run_grid(const SearchSpace& space, const Objective& objective,
                std::uint64_t limit, std::uint64_t seed) {
  const auto configs = enumerate_all(space, limit);
  std::vector<RunRecord> records(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  const auto count = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallel::max_threads())
  for (std::int64_t i = 0; i < count; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    try {
      records[ui] = evaluate_one(objective, configs[ui], seed);
    } catch (...) {
      errors[ui] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  RunLog log(space);
  for (std::size_t i = 0; i < records.size(); ++i) {
    records[i].iteration = i + 1;
    records[i].phase = Phase::grid;
    log.append(std::move(records[i]));
  }
  return log;
}

}  // namespace sharpsearch
