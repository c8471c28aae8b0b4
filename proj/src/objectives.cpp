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

#include "sharpsearch/objectives.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "sharpsearch/errors.hpp"
#include "sharpsearch/runlog.hpp"

namespace sharpsearch {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_open(std::uint64_t bits) {
  // (0,1): 53 random bits, offset by half an ulp so 0 never occurs
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

// ---------------------------------------------------------------------------
// tabular

TabularBenchmark::TabularBenchmark(SearchSpace space, std::vector<double> values_by_rank)
    : space_(std::move(space)), values_(std::move(values_by_rank)) {
  if (values_.size() != space_.cardinality()) {
    throw std::invalid_argument("tabular benchmark must cover the whole space");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("tabular values must lie in [0,1]");
    }
  }
}

double TabularBenchmark::evaluate(const Configuration& config) const {
  space_.validate(config);
  return values_[space_.rank(config)];
}

std::string TabularBenchmark::to_text() const {
  std::string out;
  for (std::uint64_t r = 0; r < values_.size(); ++r) {
    out += space_.format(space_.at(r));
    out += ' ';
    out += format_double(values_[r]);
    out += '\n';
  }
  return out;
}

TabularBenchmark TabularBenchmark::parse(std::string_view text,
                                         const SearchSpace& space) {
  const std::uint64_t n = space.cardinality();
  std::vector<std::optional<double>> table(n);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const std::size_t start = line.find_first_not_of(" \t\r", pos);
      if (start == std::string_view::npos) break;
      const std::size_t end = std::min(line.find_first_of(" \t\r", start), line.size());
      tokens.push_back(line.substr(start, end - start));
      pos = end;
    }
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != space.size() + 1) {
      throw ParseError("expected " + std::to_string(space.size()) +
                           " name=label fields and a value",
                       line_no);
    }
    std::vector<std::uint32_t> choices;
    for (std::size_t i = 0; i < space.size(); ++i) {
      const auto tok = tokens[i];
      const std::size_t eq = tok.find('=');
      if (eq == std::string_view::npos || tok.substr(0, eq) != space.spec(i).name()) {
        throw ParseError("expected field '" + space.spec(i).name() + "=...'", line_no);
      }
      const auto option = space.spec(i).find(tok.substr(eq + 1));
      if (!option) {
        throw ParseError("unknown option '" + std::string(tok.substr(eq + 1)) +
                             "' for " + space.spec(i).name(),
                         line_no);
      }
      choices.push_back(static_cast<std::uint32_t>(*option));
    }
    const auto vt = tokens.back();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(vt.data(), vt.data() + vt.size(), v);
    if (ec != std::errc() || ptr != vt.data() + vt.size() || !(v >= 0.0 && v <= 1.0)) {
      throw ParseError("value must be a number in [0,1]", line_no);
    }
    const auto r = space.rank(Configuration(std::move(choices)));
    if (table[r]) throw ParseError("duplicate configuration", line_no);
    table[r] = v;
  }
  std::vector<double> values;
  values.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    if (!table[r]) {
      throw ParseError("table is missing configuration " + space.format(space.at(r)), 0);
    }
    values.push_back(*table[r]);
  }
  return TabularBenchmark(space, std::move(values));
}

TabularBenchmark TabularBenchmark::load(const std::filesystem::path& path,
                                        const SearchSpace& space) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), space);
}

void TabularBenchmark::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_text());
}

Objective TabularBenchmark::objective() const {
  auto self = std::make_shared<const TabularBenchmark>(*this);
  return [self](const Configuration& c, std::uint64_t) {
    return EvalOutcome{self->evaluate(c), false, {}};
  };
}

// ---------------------------------------------------------------------------
// synthetic

SyntheticLandscape::SyntheticLandscape(SearchSpace space, std::uint64_t seed,
                                       double noise_std)
    : space_(std::move(space)), seed_(seed), noise_std_(noise_std) {
  if (!(noise_std >= 0.0)) throw std::invalid_argument("noise_std must be >= 0");
  const std::size_t d = space_.size();
  Rng rng(seed);
  const double effect_sd = d == 0 ? 0.0 : 0.15 / std::sqrt(static_cast<double>(d));
  const std::size_t pairs = d * (d - (d > 0 ? 1 : 0)) / 2;
  const double pair_sd = pairs == 0 ? 0.0 : 0.05 / std::sqrt(static_cast<double>(pairs));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (const auto& spec : space_.specs()) {
    std::vector<double> e(spec.size());
    for (double& v : e) v = effect_sd * normal(rng);
    effects_.push_back(std::move(e));
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      std::vector<double> t(space_.spec(i).size() * space_.spec(j).size());
      for (double& v : t) v = pair_sd * normal(rng);
      interactions_.push_back(std::move(t));
    }
  }
}

double SyntheticLandscape::evaluate(const Configuration& config) const {
  space_.validate(config);
  const std::size_t d = space_.size();
  double v = base_;
  for (std::size_t i = 0; i < d; ++i) v += effects_[i][config[i]];
  std::size_t pair = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j, ++pair) {
      v += interactions_[pair][config[i] * space_.spec(j).size() + config[j]];
    }
  }
  if (noise_std_ > 0.0) {
    std::uint64_t h = splitmix64(seed_ ^ 0x6a09e667f3bcc909ULL);
    for (std::uint32_t c : config.choices()) h = splitmix64(h ^ c);
    const double u1 = unit_open(h);
    const double u2 = unit_open(splitmix64(h));
    const double z =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    v += noise_std_ * z;
  }
  return std::clamp(v, 0.0, 1.0);
}

Objective SyntheticLandscape::objective() const {
  auto self = std::make_shared<const SyntheticLandscape>(*this);
  return [self](const Configuration& c, std::uint64_t) {
    return EvalOutcome{self->evaluate(c), false, {}};
  };
}

SyntheticLandscape make_synthetic(const SearchSpace& space, std::uint64_t seed,
                                  double noise_std) {
  return SyntheticLandscape(space, seed, noise_std);
}

// ---------------------------------------------------------------------------
// trainer

TrainerObjective::TrainerObjective(std::shared_ptr<const DatasetSplit> data,
                                   SearchSpace space, TrainerSettings settings)
    : data_(std::move(data)), space_(std::move(space)), settings_(settings) {
  if (!data_ || data_->train.size() == 0) {
    throw std::invalid_argument("trainer objective needs a non-empty dataset");
  }
  if (settings_.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  const auto& known = trainer_parameter_names();
  for (const auto& spec : space_.specs()) {
    if (std::find(known.begin(), known.end(), spec.name()) == known.end()) {
      throw std::invalid_argument("unknown trainer hyperparameter '" + spec.name() + "'");
    }
  }
}

TrainerObjective::Detail TrainerObjective::run(const Configuration& config,
                                               std::uint64_t seed,
                                               bool keep_network) const {
  Detail d;
  d.plan = plan_from_config(space_, config, settings_.mapping);
  d.plan.network.input = data_->train.shape;
  d.plan.network.num_classes = data_->num_classes;
  d.plan.network.n_per_class = d.plan.network.num_outputs / data_->num_classes;
  Rng rng(seed);
  whetstone::Network net(d.plan.network, rng);

  whetstone::TrainOptions opts;
  opts.epochs = settings_.epochs;
  opts.batch_size = settings_.batch_size;
  opts.optimizer = d.plan.optimizer;
  opts.schedule = d.plan.schedule;
  d.result = whetstone::train(net, data_->train, data_->validation, &data_->test, opts, rng);

  const auto verdict =
      whetstone::validate_schedule(d.plan.schedule, net.group_count(), settings_.epochs);
  d.outcome.failed = d.result.failed;
  d.outcome.value = d.result.failed ? 0.0 : d.result.val_accuracy;
  d.outcome.aux["binarized_val_accuracy"] = d.result.binarized_val_accuracy;
  d.outcome.aux["test_accuracy"] = d.result.test_accuracy.value_or(0.0);
  d.outcome.aux["binarized_test_accuracy"] = d.result.binarized_test_accuracy.value_or(0.0);
  d.outcome.aux["schedule_complete"] = verdict.complete ? 1.0 : 0.0;
  if (keep_network) d.network = std::move(net);
  return d;
}

EvalOutcome TrainerObjective::evaluate(const Configuration& config,
                                       std::uint64_t seed) const {
  return run(config, seed).outcome;
}

Objective TrainerObjective::objective() const {
  auto self = std::make_shared<const TrainerObjective>(*this);
  return [self](const Configuration& c, std::uint64_t seed) {
    return self->evaluate(c, seed);
  };
}

}  // namespace sharpsearch
