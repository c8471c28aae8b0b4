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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "sharpsearch/errors.hpp"
#include "sharpsearch/runlog.hpp"
#include "support.hpp"

using namespace sharpsearch;

namespace {

SearchSpace small_space() {
  return SearchSpace({HyperparameterSpec::numeric("lr", {0.0001, 1}),
                      HyperparameterSpec::categorical("opt", {"adadelta", "rmsprop"})});
}

RunLog sample_log() {
  RunLog log(small_space());
  log.append({1, Phase::init, Configuration({0, 1}), 0.25, 7, 0.5, false, {}});
  log.append({2, Phase::bayes, Configuration({1, 0}), 0.0, 7, 1.25, true, {{"aux_metric", 0.125}}});
  log.append({3, Phase::bayes, Configuration({1, 1}), 0.75, 7, 0.001, false, {}});
  return log;
}

}  // namespace

TEST_SUITE("runlog") {

TEST_CASE("jsonl has a fixed key order") {
  const auto text = sample_log().to_jsonl();
  const auto first = text.substr(0, text.find('\n'));
  CHECK(first ==
        R"({"iteration":1,"phase":"init","config":{"lr":0.0001,"opt":"rmsprop"},"value":0.25,"seed":7,"wall_time":0.5})");
  CHECK(text.find(R"("failed":true,"aux":{"aux_metric":0.125})") != std::string::npos);
}

TEST_CASE("jsonl round trips with and without a known space") {
  const auto log = sample_log();
  const auto text = log.to_jsonl();
  const auto parsed = RunLog::parse(text, small_space());
  CHECK(parsed.to_jsonl() == text);
  CHECK(parsed.records()[1].failed);
  CHECK(parsed.records()[1].aux.at("aux_metric") == 0.125);
  const auto inferred = RunLog::parse(text);
  CHECK(inferred.size() == 3);
  CHECK(inferred.space().spec(0).kind() == SpecKind::numeric);
  CHECK(inferred.space().spec(1).kind() == SpecKind::categorical);
  CHECK(inferred.to_jsonl() == text);
}

TEST_CASE("append enforces contiguous iterations and valid configurations") {
  RunLog log(small_space());
  CHECK_THROWS(log.append({2, Phase::init, Configuration({0, 0}), 0.1, 0, 0, false, {}}));
  CHECK_THROWS(log.append({1, Phase::init, Configuration({0, 2}), 0.1, 0, 0, false, {}}));
  CHECK_NOTHROW(log.append({1, Phase::init, Configuration({0, 0}), 0.1, 0, 0, false, {}}));
  CHECK_THROWS_AS(RunLog(small_space()).best_index(), std::logic_error);
}

TEST_CASE("best record and best-so-far") {
  const auto log = sample_log();
  CHECK(log.best_index() == 2);
  CHECK(log.best_so_far() == std::vector<double>{0.25, 0.25, 0.75});
  RunLog ties(small_space());
  ties.append({1, Phase::init, Configuration({0, 0}), 0.5, 0, 0, false, {}});
  ties.append({2, Phase::init, Configuration({0, 1}), 0.5, 0, 0, false, {}});
  CHECK(ties.best_index() == 0);
}

TEST_CASE("parse errors carry line numbers") {
  const auto good = sample_log().to_jsonl();
  const auto first_line = good.substr(0, good.find('\n') + 1);
  try {
    (void)RunLog::parse(first_line + "{not json}\n", small_space());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(RunLog::parse(R"({"iteration":1,"phase":"init","config":{"lr":0.5,"opt":"rmsprop"},"value":0.1,"seed":0,"wall_time":0})",
                                small_space()),
                  ParseError);
  CHECK_THROWS_AS(RunLog::parse(R"({"iteration":1,"phase":"nope","config":{"lr":1,"opt":"rmsprop"},"value":0.1,"seed":0,"wall_time":0})",
                                small_space()),
                  ParseError);
}

TEST_CASE("wall time stripping and atomic writes") {
  const auto log = sample_log();
  const auto stripped = strip_wall_time(log.to_jsonl());
  CHECK(stripped.find("\"wall_time\":1.25") == std::string::npos);
  CHECK(stripped.find("\"wall_time\":0") != std::string::npos);
  CHECK(strip_wall_time(stripped) == stripped);

  const auto dir = std::filesystem::temp_directory_path() / "sharpsearch_runlog_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "log.jsonl";
  log.save(path);
  CHECK(RunLog::load(path, small_space()).to_jsonl() == log.to_jsonl());
  CHECK(RunLog::load(path).size() == 3);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("shipped fixture logs parse against their spaces") {
  const auto t1 = SearchSpace::load(testing::data_path("table1.space"));
  const auto t2 = RunLog::load(testing::data_path("table2.runlog"), t1);
  CHECK(t2.size() == 15);
  CHECK(t2.best().iteration == 12);
  CHECK(t2.best().value == 0.5313);
  const auto t3 = SearchSpace::load(testing::data_path("table3.space"));
  const auto t6 = RunLog::load(testing::data_path("table6.runlog"), t3);
  CHECK(t6.size() == 9);
  CHECK(t6.best().value == 0.5342);
}

}  // TEST_SUITE
