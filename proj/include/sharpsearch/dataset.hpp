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

// Text dataset: one sample per line, comma-separated pixel values in
// [0,255] followed by an integer class label.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>

#include "sharpsearch/whetstone/train.hpp"

namespace sharpsearch {

struct Dataset {
  whetstone::LabeledData data;  // pixels scaled to [0,1]
  std::size_t num_classes = 10;
};

// Square feature counts become 1 x side x side images, anything else a
// flat vector. Throws ParseError on malformed rows, pixels outside [0,255]
// and labels outside [0, num_classes).
Dataset parse_dataset(std::string_view text, std::size_t num_classes = 10);
Dataset load_dataset(const std::filesystem::path& path, std::size_t num_classes = 10);

struct DatasetSplit {
  whetstone::LabeledData train;
  whetstone::LabeledData validation;
  whetstone::LabeledData test;
  std::size_t num_classes = 10;
};

// Seeded shuffle, then floor(0.7 n) train, round(0.15 n) validation and the
// remainder test.
DatasetSplit split_dataset(const Dataset& dataset, std::uint64_t seed);

}  // namespace sharpsearch
