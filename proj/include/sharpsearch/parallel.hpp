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

#include <cstddef>

namespace sharpsearch::parallel {

// Upper bound on OpenMP threads used by kernels and grid fan-out.
// Initialized from SHARPSEARCH_THREADS when set, otherwise the OpenMP default.
int max_threads();
void set_max_threads(int n);

// Reads SHARPSEARCH_THREADS and applies it. Returns the resulting cap.
int configure_from_env();

}  // namespace sharpsearch::parallel
