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

// JSON checkpoint: network spec, output key, sharpness vector and every
// parameter / running-statistic buffer. Doubles are written in shortest
// round-trip form, so save -> load reproduces the network bitwise.

#include <string>

#include "sharpsearch/whetstone/network.hpp"

namespace sharpsearch::whetstone {

std::string checkpoint_to_string(Network& net);
Network checkpoint_from_string(const std::string& text);

void save_checkpoint(Network& net, const std::string& path);
Network load_checkpoint(const std::string& path);

}  // namespace sharpsearch::whetstone
