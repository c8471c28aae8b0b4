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

#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "sharpsearch/whetstone/checkpoint.hpp"
#include "sharpsearch/whetstone/network.hpp"
#include "sharpsearch/whetstone/train.hpp"
#include "support.hpp"

using namespace sharpsearch;
using namespace sharpsearch::whetstone;

namespace {

// Two features in [0,1], label = [x0 > x1], with a margin of 0.1 around the
// diagonal so the classes are linearly separable.
LabeledData separable_toy(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LabeledData d;
  d.shape = {2, 1, 1};
  while (d.size() < n) {
    const double a = u(rng), b = u(rng);
    if (std::abs(a - b) < 0.1) continue;
    d.x.push_back(a);
    d.x.push_back(b);
    d.y.push_back(a > b ? 1 : 0);
  }
  return d;
}

NetworkSpec toy_spec() {
  NetworkSpec spec;
  spec.input = {2, 1, 1};
  spec.blocks = {BlockSpec{BlockType::dense, 16}};
  spec.num_classes = 2;
  spec.num_outputs = 10;
  spec.n_per_class = 5;
  return spec;
}

NetworkSpec small_conv_spec(ActivationKind act) {
  NetworkSpec spec;
  spec.input = {1, 4, 4};
  BlockSpec conv{BlockType::conv, 2, 3, true, BatchNormSettings{0.9, 1e-3, true, true}, std::nullopt};
  BlockSpec dense{BlockType::dense, 5, 3, false, BatchNormSettings{0.8, 1e-3, true, false}, std::nullopt};
  spec.blocks = {conv, dense};
  spec.activation = act;
  spec.num_classes = 3;
  spec.num_outputs = 6;
  spec.n_per_class = 2;
  return spec;
}

double batch_loss(Network& net, const Tensor& x, const std::vector<std::size_t>& y) {
  const auto out = net.forward(x, {true, nullptr});
  double l = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) l += net.key().loss(out.sample(i), y[i]).loss;
  return l;
}

LabeledData random_images(std::size_t n, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  LabeledData d;
  d.shape = {1, 4, 4};
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 16; ++k) d.x.push_back(u(rng));
    d.y.push_back(i % classes);
  }
  return d;
}

std::vector<std::vector<double>> snapshot(Network& net) {
  std::vector<std::vector<double>> out;
  for (const auto& s : net.state()) out.push_back(*s.values);
  return out;
}

}  // namespace

TEST_SUITE("train") {

TEST_CASE("network validation and group structure") {
  auto spec = small_conv_spec(ActivationKind::sigmoid);
  Rng rng(0);
  Network net(spec, rng);
  CHECK(net.group_count() == 2);
  CHECK(net.sharpness() == std::vector<double>{0.0, 0.0});
  const std::vector<double> s{0.3, 1.0};
  net.set_sharpness(s);
  CHECK(net.sharpness() == s);
  const std::vector<double> wrong{0.1};
  CHECK_THROWS(net.set_sharpness(wrong));
  const auto groups = net.group_outputs(random_images(3, 3, 1).all());
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].shape == Shape{2, 4, 4});
  CHECK(groups[1].shape == Shape{5, 1, 1});

  auto bad = spec;
  bad.blocks[0].filter = 4;
  CHECK_THROWS(bad.validate());
  bad = spec;
  bad.blocks = {};
  CHECK_THROWS(bad.validate());
  bad = spec;
  bad.blocks = {spec.blocks[1], spec.blocks[0]};  // conv after dense
  CHECK_THROWS(bad.validate());
  bad = spec;
  bad.n_per_class = 3;  // 9 > 6 without overlap
  CHECK_THROWS(bad.validate());
}

TEST_CASE("network parameter gradients match finite differences") {
  for (auto act : {ActivationKind::sigmoid}) {
    for (double s : {0.0, 0.5, 0.9}) {
      Rng rng(21);
      Network net(small_conv_spec(act), rng);
      const std::vector<double> sharp{s, s};
      net.set_sharpness(sharp);
      const auto data = random_images(4, 3, 5);
      const auto x = data.all();
      const auto out = net.forward(x, {true, nullptr});
      Tensor grad(out.batch, out.shape);
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto l = net.key().loss(out.sample(i), data.y[i]);
        std::copy(l.grad.begin(), l.grad.end(), grad.sample(i).begin());
      }
      net.backward(grad);
      std::vector<std::vector<double>> analytic;
      for (const auto& p : net.params()) analytic.emplace_back(p.grads.begin(), p.grads.end());
      auto params = net.params();
      std::size_t checked = 0;
      for (std::size_t k = 0; k < params.size(); ++k) {
        for (std::size_t i = 0; i < params[k].values.size(); ++i) {
          double& p = params[k].values[i];
          const double p0 = p;
          p = p0 + 1e-5;
          const double up = batch_loss(net, x, data.y);
          p = p0 - 1e-5;
          const double down = batch_loss(net, x, data.y);
          p = p0;
          CHECK(testing::close(analytic[k][i], (up - down) / 2e-5, 1e-4, 1e-8));
          ++checked;
        }
      }
      CHECK(checked > 50);
    }
  }
}

TEST_CASE("zero epochs leave the network unchanged") {
  Rng rng(1);
  Network net(toy_spec(), rng);
  const auto before = snapshot(net);
  TrainOptions opt;
  opt.epochs = 0;
  const auto data = separable_toy(50, 2);
  const auto r = train(net, data, data, nullptr, opt, rng);
  CHECK(r.history.empty());
  CHECK_FALSE(r.failed);
  CHECK(snapshot(net) == before);
  CHECK(net.sharpness() == std::vector<double>{0.0});
}

TEST_CASE("separable toy problem trains to a binarized accuracy of 0.95") {
  const auto train_set = separable_toy(200, 10);
  const auto val_set = separable_toy(200, 11);
  Rng rng(3);
  Network net(toy_spec(), rng);
  TrainOptions opt;
  opt.epochs = 40;
  opt.batch_size = 16;
  opt.schedule = {20, 10, 0};  // group 0 finishes at epoch 30
  REQUIRE(validate_schedule(opt.schedule, 1, 40).complete);
  const auto r = train(net, train_set, val_set, nullptr, opt, rng);
  CHECK_FALSE(r.failed);
  CHECK(r.history.size() == 40);
  CHECK(r.final_sharpness == std::vector<double>{1.0});
  CHECK(r.history[19].sharpness[0] == 0.0);
  CHECK(r.history[25].sharpness[0] == doctest::Approx(0.5));
  CHECK(r.history[39].sharpness[0] == 1.0);
  CHECK(r.binarized_val_accuracy >= 0.95);
  CHECK(r.val_accuracy == r.binarized_val_accuracy);
}

TEST_CASE("identical seeds give identical histories") {
  const auto data = separable_toy(100, 4);
  TrainOptions opt;
  opt.epochs = 6;
  opt.schedule = {2, 2, 0};
  opt.optimizer.kind = OptimizerKind::rmsprop;
  opt.optimizer.lr = 0.01;
  auto run = [&] {
    Rng rng(77);
    Network net(toy_spec(), rng);
    auto r = train(net, data, data, &data, opt, rng);
    return std::make_pair(r, checkpoint_to_string(net));
  };
  const auto [a, ca] = run();
  const auto [b, cb] = run();
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].loss == b.history[i].loss);
    CHECK(a.history[i].val_accuracy == b.history[i].val_accuracy);
    CHECK(a.history[i].test_accuracy == b.history[i].test_accuracy);
  }
  CHECK(ca == cb);
}

TEST_CASE("adaptive sharpener drives the groups to one") {
  const auto data = separable_toy(100, 6);
  Rng rng(8);
  Network net(toy_spec(), rng);
  TrainOptions opt;
  opt.epochs = 12;
  opt.sharpener = SharpenerKind::adaptive;
  opt.schedule = {3, 2, 0};
  opt.adaptive_threshold = 1e9;  // never pause
  const auto r = train(net, data, data, nullptr, opt, rng);
  // steps after epochs 2 and 3 bring the single group to s = 1 by epoch 4
  CHECK(r.history[2].sharpness[0] == 0.0);
  CHECK(r.history[3].sharpness[0] == 0.5);
  CHECK(r.history[4].sharpness[0] == 1.0);
  CHECK(r.final_sharpness[0] == 1.0);
}

TEST_CASE("non-finite loss stops training with a failure flag") {
  auto data = separable_toy(20, 1);
  data.x[0] = std::nan("");
  Rng rng(2);
  Network net(toy_spec(), rng);
  TrainOptions opt;
  opt.epochs = 5;
  const auto r = train(net, data, separable_toy(20, 2), nullptr, opt, rng);
  CHECK(r.failed);
  CHECK(r.history.empty());
}

TEST_CASE("shape mismatch and empty data are rejected") {
  Rng rng(2);
  Network net(toy_spec(), rng);
  TrainOptions opt;
  opt.epochs = 1;
  CHECK_THROWS(train(net, LabeledData{{2, 1, 1}, {}, {}}, separable_toy(4, 1), nullptr, opt, rng));
  CHECK_THROWS(train(net, random_images(4, 2, 1), separable_toy(4, 1), nullptr, opt, rng));
}

TEST_CASE("dead neuron fraction") {
  Rng rng(3);
  Network net(toy_spec(), rng);
  for (auto& p : net.params()) {
    const bool bias = p.name.ends_with("bias");
    for (auto& v : p.values) v = bias ? -1.0 : 0.0;
  }
  net.set_sharpness(std::vector<double>{1.0});
  const auto probe = separable_toy(30, 1);
  CHECK(dead_neuron_fraction(net, probe) == 1.0);

  // one hidden unit with a positive bias fires on every probe
  auto params = net.params();
  params[1].values[0] = 1.0;  // first layer bias
  CHECK(dead_neuron_fraction(net, probe) == doctest::Approx(15.0 / 16.0));

  // supersets of the probe set never raise the fraction
  Rng rng2(4);
  Network fresh(toy_spec(), rng2);
  fresh.set_sharpness(std::vector<double>{1.0});
  double prev = 1.0;
  for (std::size_t n : {1u, 5u, 20u, 80u}) {
    const auto subset = separable_toy(n, 9);  // prefixes of the same stream
    const double f = dead_neuron_fraction(fresh, subset);
    CHECK(f <= prev);
    CHECK(f >= 0.0);
    prev = f;
  }
}

TEST_CASE("disabled noise makes its std irrelevant") {
  auto with = toy_spec();
  with.blocks[0].noise_std = 0.3;
  auto other = with;
  other.blocks[0].noise_std = 0.9;
  auto without = toy_spec();
  const auto x = separable_toy(10, 5).all();
  Rng r1(1), r2(1), r3(1);
  Network a(with, r1), b(other, r2), c(without, r3);
  // inference mode ignores the noise layer entirely
  CHECK(a.forward(x, {}).data == b.forward(x, {}).data);
  CHECK(a.forward(x, {}).data == c.forward(x, {}).data);
}

}  // TEST_SUITE

TEST_SUITE("checkpoint") {

TEST_CASE("checkpoint round trip is bitwise") {
  auto spec = small_conv_spec(ActivationKind::bounded_relu);
  spec.blocks[1].noise_std = 0.25;
  spec.overlap = true;
  Rng rng(31);
  Network net(spec, rng);
  const auto data = random_images(30, 3, 3);
  TrainOptions opt;
  opt.epochs = 3;
  opt.schedule = {1, 2, 0};
  opt.batch_size = 8;
  (void)train(net, data, data, nullptr, opt, rng);

  const auto text = checkpoint_to_string(net);
  auto loaded = checkpoint_from_string(text);
  CHECK(loaded.spec() == net.spec());
  CHECK(loaded.key() == net.key());
  CHECK(loaded.sharpness() == net.sharpness());
  CHECK(snapshot(loaded) == snapshot(net));
  CHECK(checkpoint_to_string(loaded) == text);
  CHECK(loaded.forward(data.all(), {}).data == net.forward(data.all(), {}).data);

  const auto dir = std::filesystem::temp_directory_path() / "sharpsearch_ckpt_test";
  std::filesystem::create_directories(dir);
  save_checkpoint(net, (dir / "c.json").string());
  auto from_file = load_checkpoint((dir / "c.json").string());
  CHECK(snapshot(from_file) == snapshot(net));
  std::filesystem::remove_all(dir);
}

TEST_CASE("copies are deep") {
  Rng rng(5);
  Network a(toy_spec(), rng);
  Network b = a;
  b.params()[0].values[0] += 1.0;
  CHECK(snapshot(a) != snapshot(b));
}

TEST_CASE("malformed checkpoints are rejected") {
  CHECK_THROWS(checkpoint_from_string("{}"));
  CHECK_THROWS(checkpoint_from_string("not json"));
  Rng rng(5);
  Network a(toy_spec(), rng);
  auto text = checkpoint_to_string(a);
  const auto pos = text.find("\"version\":1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 11, "\"version\":9");
  CHECK_THROWS(checkpoint_from_string(text));
}

}  // TEST_SUITE
