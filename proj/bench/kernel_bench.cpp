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

// Serial reference kernels vs their OpenMP counterparts. Thread count
// follows OMP_NUM_THREADS / SHARPSEARCH_THREADS.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sharpsearch/kernels.hpp"

namespace k = sharpsearch::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

using DenseFn = void (*)(const k::DenseShape&, std::span<const double>, std::span<const double>,
                         std::span<const double>, std::span<double>);
using ConvFn = void (*)(const k::ConvShape&, std::span<const double>, std::span<const double>,
                        std::span<const double>, std::span<double>);
using ConvParamsFn = void (*)(const k::ConvShape&, std::span<const double>, std::span<const double>,
                              std::span<double>, std::span<double>);
using GramFn = void (*)(std::span<const double>, std::size_t, double, double, std::span<double>);

template <DenseFn F>
void BM_dense_forward(benchmark::State& state) {
  const k::DenseShape s{64, static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(0))};
  const auto in = random_vector(s.batch * s.in, 1);
  const auto w = random_vector(s.in * s.out, 2);
  const auto b = random_vector(s.out, 3);
  std::vector<double> out(s.batch * s.out);
  for (auto _ : state) {
    F(s, in, w, b, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.batch * s.in * s.out));
}

k::ConvShape conv_shape(std::int64_t channels) {
  const auto c = static_cast<std::size_t>(channels);
  return {32, c, c, 8, 8, 3};
}

template <ConvFn F>
void BM_conv_forward(benchmark::State& state) {
  const auto s = conv_shape(state.range(0));
  const auto in = random_vector(s.in_size(), 1);
  const auto w = random_vector(s.weight_size(), 2);
  const auto b = random_vector(s.out_channels, 3);
  std::vector<double> out(s.out_size());
  for (auto _ : state) {
    F(s, in, w, b, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <ConvParamsFn F>
void BM_conv_backward_params(benchmark::State& state) {
  const auto s = conv_shape(state.range(0));
  const auto grad = random_vector(s.out_size(), 1);
  const auto in = random_vector(s.in_size(), 2);
  std::vector<double> gw(s.weight_size()), gb(s.out_channels);
  for (auto _ : state) {
    F(s, grad, in, gw, gb);
    benchmark::DoNotOptimize(gw.data());
  }
}

template <GramFn F>
void BM_matern52_gram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 22;
  const auto pts = random_vector(n * dim, 4);
  std::vector<double> gram(n * n);
  for (auto _ : state) {
    F(pts, dim, 0.3, 1.0, gram);
    benchmark::DoNotOptimize(gram.data());
  }
}

}  // namespace

BENCHMARK(BM_dense_forward<k::reference::dense_forward>)->Name("dense_forward/reference")->Arg(64)->Arg(256);
BENCHMARK(BM_dense_forward<k::omp::dense_forward>)->Name("dense_forward/omp")->Arg(64)->Arg(256);
BENCHMARK(BM_conv_forward<k::reference::conv_forward>)->Name("conv_forward/reference")->Arg(4)->Arg(16);
BENCHMARK(BM_conv_forward<k::omp::conv_forward>)->Name("conv_forward/omp")->Arg(4)->Arg(16);
BENCHMARK(BM_conv_backward_params<k::reference::conv_backward_params>)
    ->Name("conv_backward_params/reference")->Arg(4)->Arg(16);
BENCHMARK(BM_conv_backward_params<k::omp::conv_backward_params>)
    ->Name("conv_backward_params/omp")->Arg(4)->Arg(16);
BENCHMARK(BM_matern52_gram<k::reference::matern52_gram>)->Name("matern52_gram/reference")->Arg(30)->Arg(256);
BENCHMARK(BM_matern52_gram<k::omp::matern52_gram>)->Name("matern52_gram/omp")->Arg(30)->Arg(256);

BENCHMARK_MAIN();
