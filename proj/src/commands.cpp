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

#include "sharpsearch/commands.hpp"

#include <charconv>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "sharpsearch/config_mapping.hpp"
#include "sharpsearch/errors.hpp"
#include "sharpsearch/objectives.hpp"
#include "sharpsearch/optimizer.hpp"
#include "sharpsearch/parallel.hpp"
#include "sharpsearch/reports.hpp"
#include "sharpsearch/whetstone/checkpoint.hpp"

namespace sharpsearch {

namespace {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Flags shared by grid and bo that pick the objective.
struct ObjectiveFlags {
  std::string table;
  std::optional<std::uint64_t> synthetic_seed;
  double noise = 0.0;
  std::string dataset;
  std::size_t epochs = 40;
  std::size_t batch_size = 64;
  std::size_t width_divisor = 16;
  std::uint64_t split_seed = 0;

  void add_to(CLI::App& cmd) {
    auto* table_opt = cmd.add_option("--table", table, "tabular benchmark file");
    auto* synth_opt =
        cmd.add_option("--synthetic-seed", synthetic_seed, "synthetic landscape seed");
    cmd.add_option("--noise", noise, "synthetic landscape noise std")
        ->check(CLI::NonNegativeNumber);
    auto* data_opt = cmd.add_option("--dataset", dataset, "dataset file for the trainer");
    table_opt->excludes(synth_opt)->excludes(data_opt);
    synth_opt->excludes(data_opt);
    add_trainer_flags(cmd);
  }

  void add_trainer_flags(CLI::App& cmd) {
    cmd.add_option("--epochs", epochs, "training epochs")->capture_default_str();
    cmd.add_option("--batch-size", batch_size, "minibatch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--width-divisor", width_divisor,
                   "divide feature counts and dense width by this")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--split-seed", split_seed, "train/validation/test split seed")
        ->capture_default_str();
  }

  TrainerSettings trainer_settings() const {
    TrainerSettings s;
    s.epochs = epochs;
    s.batch_size = batch_size;
    s.mapping.width_divisor = width_divisor;
    return s;
  }

  std::shared_ptr<const DatasetSplit> load_split() const {
    // An unreadable dataset means the objective cannot be evaluated at all.
    if (!fs::is_regular_file(dataset)) {
      throw ObjectiveError("cannot open dataset " + dataset);
    }
    return std::make_shared<const DatasetSplit>(split_dataset(load_dataset(dataset), split_seed));
  }

  Objective build(const SearchSpace& space) const {
    if (!table.empty()) {
      if (!fs::is_regular_file(table)) throw ObjectiveError("cannot open table " + table);
      return TabularBenchmark::load(table, space).objective();
    }
    if (synthetic_seed) return make_synthetic(space, *synthetic_seed, noise).objective();
    if (!dataset.empty()) {
      return TrainerObjective(load_split(), space, trainer_settings()).objective();
    }
    throw CLI::ValidationError("objective",
                               "one of --table, --synthetic-seed or --dataset is required");
  }
};

void print_summary(const RunLog& log, std::ostream& out) {
  const auto& best = log.best();
  std::size_t failed = 0;
  for (const auto& r : log.records()) failed += r.failed ? 1 : 0;
  out << "evaluations: " << log.size() << "\n";
  out << "failed evaluations: " << failed << "\n";
  out << "best iteration: " << best.iteration << "\n";
  out << "best value: " << format_double(best.value) << "\n";
  out << "best config: " << log.space().format(best.config) << "\n";
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_file_atomic(out_path, text);
  }
}

// name=label assignments; unassigned names fall back to the mapping
// defaults when the space offers that option.
Configuration config_from_flags(const SearchSpace& space,
                                const std::vector<std::string>& sets) {
  std::map<std::string, std::string, std::less<>> assignments;
  for (const auto& s : sets) {
    std::istringstream tokens(s);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw std::invalid_argument("expected name=value, got '" + tok + "'");
      }
      assignments[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
  }
  for (const auto& spec : space.specs()) {
    if (assignments.contains(spec.name())) continue;
    const auto def = default_assignments().find(spec.name());
    if (def != default_assignments().end() && spec.find(def->second)) {
      assignments[spec.name()] = def->second;
    } else {
      throw std::invalid_argument("no value given for " + spec.name());
    }
  }
  return space.from_assignments(assignments);
}

std::string history_csv(const whetstone::TrainResult& result, std::size_t groups) {
  std::string out = "epoch,loss,val_accuracy,test_accuracy";
  for (std::size_t g = 0; g < groups; ++g) out += ",s" + std::to_string(g);
  out += "\n";
  for (const auto& rec : result.history) {
    out += std::to_string(rec.epoch) + "," + format_double(rec.loss) + "," +
           format_double(rec.val_accuracy) + "," +
           (rec.test_accuracy ? format_double(*rec.test_accuracy) : std::string());
    for (double s : rec.sharpness) out += "," + format_double(s);
    out += "\n";
  }
  return out;
}

std::vector<std::uint64_t> parse_columns(const std::string& text) {
  std::vector<std::uint64_t> cols;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw std::invalid_argument("bad iteration list '" + text + "'");
    }
    cols.push_back(v);
  }
  return cols;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  parallel::configure_from_env();

  CLI::App app{"sharpsearch: Bayesian hyperparameter search for sharpened networks"};
  app.require_subcommand(1);
  std::function<void()> action;

  // space info
  std::string space_path;
  auto* space_cmd = app.add_subcommand("space", "search-space utilities");
  space_cmd->require_subcommand(1);
  auto* info = space_cmd->add_subcommand("info", "list hyperparameters and cardinality");
  info->add_option("--space,space_file", space_path, "space file")->required()->check(CLI::ExistingFile);
  info->callback([&] {
    action = [&] {
      const SearchSpace space = SearchSpace::load(space_path);
      out << "hyperparameters: " << space.size() << "\n";
      for (const auto& spec : space.specs()) {
        out << spec.name() << " "
            << (spec.kind() == SpecKind::numeric ? "numeric" : "categorical") << " "
            << spec.size() << ":";
        for (const auto& l : spec.labels()) out << " " << l;
        out << "\n";
      }
      out << "cardinality: " << space.cardinality() << "\n";
    };
  });

  // grid
  ObjectiveFlags grid_obj;
  std::string grid_out;
  std::uint64_t grid_seed = 0;
  std::uint64_t grid_limit = 1'000'000;
  auto* grid = app.add_subcommand("grid", "evaluate every configuration");
  grid->add_option("--space", space_path, "space file")->required()->check(CLI::ExistingFile);
  grid->add_option("--out", grid_out, "run log path (JSONL)");
  grid->add_option("--seed", grid_seed, "objective seed")->capture_default_str();
  grid->add_option("--limit", grid_limit, "maximum cardinality")->capture_default_str();
  grid_obj.add_to(*grid);
  grid->callback([&] {
    action = [&] {
      const SearchSpace space = SearchSpace::load(space_path);
      const RunLog log = run_grid(space, grid_obj.build(space), grid_limit, grid_seed);
      if (!grid_out.empty()) log.save(grid_out);
      print_summary(log, out);
    };
  });

  // bo
  ObjectiveFlags bo_obj;
  std::string bo_out;
  LoopConfig loop;
  std::string acq_name = "ei";
  std::optional<double> acq_param;
  auto* bo = app.add_subcommand("bo", "sequential Bayesian optimization");
  bo->add_option("--space", space_path, "space file")->required()->check(CLI::ExistingFile);
  bo->add_option("--out", bo_out, "run log path (JSONL)");
  bo->add_option("--seed", loop.seed, "loop seed")->capture_default_str();
  bo->add_option("--n-iter", loop.n_iter, "total evaluations")->capture_default_str();
  bo->add_option("--n-init", loop.n_init, "random initial evaluations")
      ->capture_default_str();
  bo->add_option("--acq", acq_name, "acquisition")
      ->check(CLI::IsMember({"ei", "ucb", "poi"}))
      ->capture_default_str();
  bo->add_option("--acq-param", acq_param,
                 "xi for ei/poi (default 0.01), kappa for ucb (default 2)");
  bo->add_option("--candidate-limit", loop.candidate_limit, "candidates per proposal")
      ->capture_default_str();
  bo_obj.add_to(*bo);
  bo->callback([&] {
    action = [&] {
      const SearchSpace space = SearchSpace::load(space_path);
      switch (parse_acquisition_kind(acq_name)) {
        case AcquisitionKind::expected_improvement: loop.acquisition = Acquisition::ei(acq_param.value_or(0.01)); break;
        case AcquisitionKind::upper_confidence_bound: loop.acquisition = Acquisition::ucb(acq_param.value_or(2.0)); break;
        case AcquisitionKind::probability_of_improvement: loop.acquisition = Acquisition::poi(acq_param.value_or(0.01)); break;
      }
      if (loop.n_iter < loop.n_init) {
        throw CLI::ValidationError("--n-iter", "must be >= --n-init");
      }
      const RunLog log = run_bayesian(space, bo_obj.build(space), loop);
      if (!bo_out.empty()) log.save(bo_out);
      print_summary(log, out);
    };
  });

  // train-one
  ObjectiveFlags train_obj;
  std::vector<std::string> sets;
  std::string train_out;
  std::uint64_t train_seed = 0;
  auto* train_cmd = app.add_subcommand("train-one", "train a single configuration");
  train_cmd->add_option("--space", space_path, "space file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--set", sets, "name=value assignments (repeatable)");
  train_cmd->add_option("--dataset", train_obj.dataset, "dataset file")->required();
  train_cmd->add_option("--seed", train_seed, "training seed")->capture_default_str();
  train_cmd->add_option("--out", train_out,
                        "output directory for history.csv and checkpoint.json");
  train_obj.add_trainer_flags(*train_cmd);
  train_cmd->callback([&] {
    action = [&] {
      const SearchSpace space = SearchSpace::load(space_path);
      const Configuration config = config_from_flags(space, sets);
      const TrainerObjective objective(train_obj.load_split(), space,
                                       train_obj.trainer_settings());
      auto detail = objective.run(config, train_seed, true);
      whetstone::Network& net = *detail.network;
      const auto verdict = whetstone::validate_schedule(detail.plan.schedule,
                                                        net.group_count(), train_obj.epochs);
      out << "config: " << space.format(config) << "\n";
      if (verdict.complete) {
        out << "schedule complete\n";
      } else {
        out << "warning: schedule incomplete: group " << *verdict.first_unfinished_group
            << "\n";
      }
      out << "epochs trained: " << detail.result.history.size() << "\n";
      if (detail.result.failed) out << "training diverged\n";
      out << "val accuracy: " << format_double(detail.outcome.value) << "\n";
      out << "binarized val accuracy: "
          << format_double(detail.result.binarized_val_accuracy) << "\n";
      out << "test accuracy: " << format_double(detail.result.test_accuracy.value_or(0))
          << "\n";
      out << "binarized test accuracy: "
          << format_double(detail.result.binarized_test_accuracy.value_or(0)) << "\n";
      if (!train_out.empty()) {
        fs::create_directories(train_out);
        write_file_atomic(fs::path(train_out) / "history.csv",
                          history_csv(detail.result, net.group_count()));
        whetstone::save_checkpoint(net, (fs::path(train_out) / "checkpoint.json").string());
      }
      if (detail.result.failed) throw ObjectiveError("training diverged");
    };
  });

  // report
  std::string log_path;
  std::string report_space;
  std::string report_out;
  std::string columns;
  auto* report = app.add_subcommand("report", "tables computed from a run log");
  report->require_subcommand(1);
  auto add_report_flags = [&](CLI::App* cmd) {
    cmd->add_option("--log,log_file", log_path, "run log (JSONL)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--space", report_space, "space file (inferred from the log if absent)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", report_out, "write the table here instead of stdout");
  };
  auto load_log = [&] {
    if (report_space.empty()) return RunLog::load(log_path);
    return RunLog::load(log_path, SearchSpace::load(report_space));
  };
  auto* trace = report->add_subcommand("trace", "iteration,value,best_so_far");
  add_report_flags(trace);
  trace->callback([&] { action = [&] { emit(report_trace(load_log()), report_out, out); }; });
  auto* hist = report->add_subcommand("hist", "per-hyperparameter option counts");
  add_report_flags(hist);
  hist->callback([&] { action = [&] { emit(report_hist(load_log()), report_out, out); }; });
  auto* sens = report->add_subcommand("sensitivity", "side-by-side experiments");
  add_report_flags(sens);
  sens->add_option("--columns", columns, "comma-separated iteration numbers (default: all)");
  sens->callback([&] {
    action = [&] {
      const RunLog log = load_log();
      std::vector<std::uint64_t> cols;
      if (columns.empty()) {
        for (const auto& r : log.records()) cols.push_back(r.iteration);
      } else {
        cols = parse_columns(columns);
      }
      emit(report_sensitivity(log, cols), report_out, out);
    };
  });

  // bench make-tabular
  std::uint64_t bench_seed = 0;
  double bench_noise = 0.0;
  std::string bench_out;
  std::uint64_t bench_limit = 1'000'000;
  auto* bench = app.add_subcommand("bench", "benchmark utilities");
  bench->require_subcommand(1);
  auto* make_tab = bench->add_subcommand("make-tabular", "materialize a synthetic landscape");
  make_tab->add_option("--space", space_path, "space file")->required()->check(CLI::ExistingFile);
  make_tab->add_option("--seed", bench_seed, "landscape seed")->capture_default_str();
  make_tab->add_option("--noise", bench_noise, "noise std")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  make_tab->add_option("--out", bench_out, "table file (stdout if absent)");
  make_tab->add_option("--limit", bench_limit, "maximum cardinality")->capture_default_str();
  make_tab->callback([&] {
    action = [&] {
      const SearchSpace space = SearchSpace::load(space_path);
      const auto land = make_synthetic(space, bench_seed, bench_noise);
      const auto table = TabularBenchmark::materialize(
          space, [&](const Configuration& c) { return land.evaluate(c); }, bench_limit);
      emit(table.to_text(), bench_out, out);
      if (!bench_out.empty()) out << "wrote " << table.size() << " rows\n";
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ObjectiveError& e) {
    err << "objective failure: " << e.what() << "\n";
    return kExitObjective;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "out of range: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace sharpsearch
