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

#include "sharpsearch/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "sharpsearch/errors.hpp"

namespace sharpsearch {

namespace {

double parse_number(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() &&
         (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() ||
      !std::isfinite(v)) {
    throw ParseError("bad number '" + std::string(field) + "'", line);
  }
  return v;
}

whetstone::LabeledData subset(const whetstone::LabeledData& src,
                              std::span<const std::size_t> rows) {
  whetstone::LabeledData out;
  out.shape = src.shape;
  const std::size_t d = src.shape.size();
  out.x.reserve(rows.size() * d);
  out.y.reserve(rows.size());
  for (std::size_t r : rows) {
    out.x.insert(out.x.end(), src.x.begin() + static_cast<std::ptrdiff_t>(r * d),
                 src.x.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
    out.y.push_back(src.y[r]);
  }
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text, std::size_t num_classes) {
  if (num_classes == 0) throw std::invalid_argument("num_classes must be positive");
  Dataset ds;
  ds.num_classes = num_classes;
  std::size_t features = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') continue;

    std::vector<double> fields;
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      fields.push_back(parse_number(line.substr(pos, comma - pos), line_no));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() < 2) throw ParseError("row needs pixels and a label", line_no);
    const std::size_t n = fields.size() - 1;
    if (features == 0) features = n;
    if (n != features) {
      throw ParseError("row has " + std::to_string(n) + " pixels, expected " +
                           std::to_string(features),
                       line_no);
    }
    const double label = fields.back();
    if (label < 0 || label != std::floor(label) ||
        label >= static_cast<double>(num_classes)) {
      throw ParseError("label out of range", line_no);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (fields[i] < 0.0 || fields[i] > 255.0) {
        throw ParseError("pixel outside [0,255]", line_no);
      }
      ds.data.x.push_back(fields[i] / 255.0);
    }
    ds.data.y.push_back(static_cast<std::size_t>(label));
  }
  if (ds.data.y.empty()) throw ParseError("dataset is empty", 0);
  const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(features))));
  ds.data.shape = side * side == features ? whetstone::Shape{1, side, side}
                                          : whetstone::Shape{features, 1, 1};
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, std::size_t num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open dataset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), num_classes);
}

DatasetSplit split_dataset(const Dataset& dataset, std::uint64_t seed) {
  const std::size_t n = dataset.data.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(0.7 * static_cast<double>(n)));
  const auto n_val = std::min(
      n - n_train, static_cast<std::size_t>(std::llround(0.15 * static_cast<double>(n))));
  const std::span<const std::size_t> all(order);
  DatasetSplit split;
  split.num_classes = dataset.num_classes;
  split.train = subset(dataset.data, all.subspan(0, n_train));
  split.validation = subset(dataset.data, all.subspan(n_train, n_val));
  split.test = subset(dataset.data, all.subspan(n_train + n_val));
  return split;
}

}  // namespace sharpsearch
