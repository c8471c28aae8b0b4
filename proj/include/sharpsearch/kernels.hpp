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

// Data-parallel inner loops shared by the trainer and the surrogate.
//
// Every kernel comes in two flavours: `reference` is a plain serial loop
// nest kept as the test oracle, and `omp` is the OpenMP version used in
// production. The OpenMP kernels partition work by output element and
// reduce each element serially in a fixed order, so results do not depend on
// the thread count.

#include <cmath>
#include <cstddef>
#include <span>

namespace sharpsearch::kernels {

// Row-major [batch][in] -> [batch][out], weights [out][in].
struct DenseShape {
  std::size_t batch = 0;
  std::size_t in = 0;
  std::size_t out = 0;
};

// NCHW tensors, weights [out_channels][in_channels][filter][filter].
// Stride 1, same padding; filter must be odd.
struct ConvShape {
  std::size_t batch = 0;
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t filter = 1;

  std::size_t in_size() const { return batch * in_channels * height * width; }
  std::size_t out_size() const { return batch * out_channels * height * width; }
  std::size_t weight_size() const {
    return out_channels * in_channels * filter * filter;
  }
};

// Matern 5/2 covariance as a function of Euclidean distance.
inline double matern52(double distance, double lengthscale,
                       double signal_variance) {
  const double scaled = std::sqrt(5.0) * distance / lengthscale;
  return signal_variance * (1.0 + scaled + scaled * scaled / 3.0) *
         std::exp(-scaled);
}

namespace reference {
#include "sharpsearch/kernel_decls.inc"
}  // namespace reference

namespace omp {
#include "sharpsearch/kernel_decls.inc"
}  // namespace omp

}  // namespace sharpsearch::kernels
