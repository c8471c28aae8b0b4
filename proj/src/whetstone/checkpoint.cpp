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

#include "sharpsearch/whetstone/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "sharpsearch/errors.hpp"
#include "sharpsearch/runlog.hpp"

namespace sharpsearch::whetstone {

namespace {

using json = nlohmann::ordered_json;
constexpr const char* kFormat = "sharpsearch-checkpoint";

json spec_to_json(const NetworkSpec& spec) {
  json blocks = json::array();
  for (const BlockSpec& b : spec.blocks) {
    json jb;
    jb["type"] = b.type == BlockType::conv ? "conv" : "dense";
    jb["units"] = b.units;
    jb["filter"] = b.filter;
    jb["pool"] = b.pool;
    if (b.batchnorm) {
      jb["batchnorm"] = {{"momentum", b.batchnorm->momentum},
                         {"epsilon", b.batchnorm->epsilon},
                         {"center", b.batchnorm->center},
                         {"scale", b.batchnorm->scale}};
    } else {
      jb["batchnorm"] = nullptr;
    }
    jb["noise_std"] = b.noise_std ? json(*b.noise_std) : json(nullptr);
    blocks.push_back(std::move(jb));
  }
  return {{"input", {spec.input.channels, spec.input.height, spec.input.width}},
          {"activation", to_string(spec.activation)},
          {"num_classes", spec.num_classes},
          {"num_outputs", spec.num_outputs},
          {"n_per_class", spec.n_per_class},
          {"overlap", spec.overlap},
          {"blocks", std::move(blocks)}};
}

NetworkSpec spec_from_json(const json& j) {
  NetworkSpec spec;
  const auto& in = j.at("input");
  spec.input = {in.at(0).get<std::size_t>(), in.at(1).get<std::size_t>(),
                in.at(2).get<std::size_t>()};
  spec.activation = parse_activation_kind(j.at("activation").get<std::string>());
  spec.num_classes = j.at("num_classes").get<std::size_t>();
  spec.num_outputs = j.at("num_outputs").get<std::size_t>();
  spec.n_per_class = j.at("n_per_class").get<std::size_t>();
  spec.overlap = j.at("overlap").get<bool>();
  for (const auto& jb : j.at("blocks")) {
    BlockSpec b;
    const auto type = jb.at("type").get<std::string>();
    if (type != "conv" && type != "dense") throw ParseError("unknown block type " + type, 0);
    b.type = type == "conv" ? BlockType::conv : BlockType::dense;
    b.units = jb.at("units").get<std::size_t>();
    b.filter = jb.at("filter").get<std::size_t>();
    b.pool = jb.at("pool").get<bool>();
    if (!jb.at("batchnorm").is_null()) {
      const auto& bn = jb.at("batchnorm");
      b.batchnorm = BatchNormSettings{bn.at("momentum").get<double>(),
                                      bn.at("epsilon").get<double>(),
                                      bn.at("center").get<bool>(),
                                      bn.at("scale").get<bool>()};
    }
    if (!jb.at("noise_std").is_null()) b.noise_std = jb.at("noise_std").get<double>();
    spec.blocks.push_back(b);
  }
  return spec;
}

}  // namespace

std::string checkpoint_to_string(Network& net) {
  json j;
  j["format"] = kFormat;
  j["version"] = 1;
  j["spec"] = spec_to_json(net.spec());
  j["key"] = net.key().assignment();
  j["sharpness"] = net.sharpness();
  json state = json::object();
  for (const auto& s : net.state()) state[s.name] = *s.values;
  j["state"] = std::move(state);
  return j.dump() + "\n";
}

Network checkpoint_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 0);
  }
  try {
    if (j.at("format").get<std::string>() != kFormat) {
      throw ParseError("not a sharpsearch checkpoint", 0);
    }
    if (j.at("version").get<int>() != 1) {
      throw ParseError("unsupported checkpoint version", 0);
    }
    NetworkSpec spec = spec_from_json(j.at("spec"));
    OutputKey key(j.at("key").get<std::vector<std::vector<std::size_t>>>(),
                  spec.num_outputs);
    Rng rng(0);
    Network net(std::move(spec), std::move(key), rng);
    net.set_sharpness(j.at("sharpness").get<std::vector<double>>());
    const auto& state = j.at("state");
    const auto buffers = net.state();
    if (state.size() != buffers.size()) {
      throw ParseError("checkpoint buffer count mismatch", 0);
    }
    for (const auto& s : buffers) {
      auto values = state.at(s.name).get<std::vector<double>>();
      if (values.size() != s.values->size()) {
        throw ParseError("checkpoint buffer '" + s.name + "' has wrong size", 0);
      }
      *s.values = std::move(values);
    }
    return net;
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 0);
  }
}

void save_checkpoint(Network& net, const std::string& path) {
  write_file_atomic(path, checkpoint_to_string(net));
}

Network load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return checkpoint_from_string(buf.str());
}

}  // namespace sharpsearch::whetstone
