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

#include "sharpsearch/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace sharpsearch::parallel {

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int n) { omp_set_num_threads(n < 1 ? 1 : n); }

int configure_from_env() {
  if (const char* env = std::getenv("SHARPSEARCH_THREADS")) {
    try {
      int n = std::stoi(env);
      if (n >= 1) set_max_threads(n);
    } catch (const std::exception&) {
      // ignore unparseable values, keep the OpenMP default
    }
  }
  return max_threads();
}

}  // namespace sharpsearch::parallel
