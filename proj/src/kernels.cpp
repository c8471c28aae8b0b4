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

#include "sharpsearch/kernels.hpp"

#include <algorithm>
#include <cstdint>

namespace sharpsearch::kernels {

namespace {

double squared_distance(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return acc;
}

// Range of output rows/cols touched by filter tap `k` under same padding.
struct TapRange {
  std::size_t lo;
  std::size_t hi;  // exclusive
};

TapRange tap_range(std::size_t k, std::size_t pad, std::size_t extent) {
  // output coordinate y reads input y + k - pad, valid when in [0, extent)
  const std::size_t lo = k < pad ? pad - k : 0;
  const std::size_t hi = k > pad ? extent - std::min(extent, k - pad) : extent;
  return {lo, std::max(lo, hi)};
}

}  // namespace

// ---------------------------------------------------------------------------
// reference

namespace reference {

void dense_forward(const DenseShape& s, std::span<const double> in,
                   std::span<const double> weights, std::span<const double> bias,
                   std::span<double> out) {
  for (std::size_t b = 0; b < s.batch; ++b) {
    for (std::size_t o = 0; o < s.out; ++o) {
      double acc = bias[o];
      for (std::size_t i = 0; i < s.in; ++i) {
        acc += in[b * s.in + i] * weights[o * s.in + i];
      }
      out[b * s.out + o] = acc;
    }
  }
}

void dense_backward_input(const DenseShape& s, std::span<const double> grad_out,
                          std::span<const double> weights,
                          std::span<double> grad_in) {
  std::fill(grad_in.begin(), grad_in.end(), 0.0);
  for (std::size_t b = 0; b < s.batch; ++b) {
    for (std::size_t o = 0; o < s.out; ++o) {
      const double g = grad_out[b * s.out + o];
      for (std::size_t i = 0; i < s.in; ++i) {
        grad_in[b * s.in + i] += g * weights[o * s.in + i];
      }
    }
  }
}

void dense_backward_params(const DenseShape& s,
                           std::span<const double> grad_out,
                           std::span<const double> in,
                           std::span<double> grad_weights,
                           std::span<double> grad_bias) {
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
  for (std::size_t b = 0; b < s.batch; ++b) {
    for (std::size_t o = 0; o < s.out; ++o) {
      const double g = grad_out[b * s.out + o];
      grad_bias[o] += g;
      for (std::size_t i = 0; i < s.in; ++i) {
        grad_weights[o * s.in + i] += g * in[b * s.in + i];
      }
    }
  }
}

void conv_forward(const ConvShape& s, std::span<const double> in,
                  std::span<const double> weights, std::span<const double> bias,
                  std::span<double> out) {
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(s.filter / 2);
  const auto h = static_cast<std::ptrdiff_t>(s.height);
  const auto w = static_cast<std::ptrdiff_t>(s.width);
  const auto f = static_cast<std::ptrdiff_t>(s.filter);
  for (std::size_t n = 0; n < s.batch; ++n) {
    for (std::size_t o = 0; o < s.out_channels; ++o) {
      for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
          double acc = bias[o];
          for (std::size_t c = 0; c < s.in_channels; ++c) {
            for (std::ptrdiff_t ky = 0; ky < f; ++ky) {
              for (std::ptrdiff_t kx = 0; kx < f; ++kx) {
                const std::ptrdiff_t iy = y + ky - pad;
                const std::ptrdiff_t ix = x + kx - pad;
                if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                acc += in[((n * s.in_channels + c) * s.height + iy) * s.width +
                          ix] *
                       weights[((o * s.in_channels + c) * s.filter + ky) *
                                   s.filter +
                               kx];
              }
            }
          }
          out[((n * s.out_channels + o) * s.height + y) * s.width + x] = acc;
        }
      }
    }
  }
}

void conv_backward_input(const ConvShape& s, std::span<const double> grad_out,
                         std::span<const double> weights,
                         std::span<double> grad_in) {
  std::fill(grad_in.begin(), grad_in.end(), 0.0);
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(s.filter / 2);
  const auto h = static_cast<std::ptrdiff_t>(s.height);
  const auto w = static_cast<std::ptrdiff_t>(s.width);
  const auto f = static_cast<std::ptrdiff_t>(s.filter);
  for (std::size_t n = 0; n < s.batch; ++n) {
    for (std::size_t o = 0; o < s.out_channels; ++o) {
      for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
          const double g =
              grad_out[((n * s.out_channels + o) * s.height + y) * s.width + x];
          for (std::size_t c = 0; c < s.in_channels; ++c) {
            for (std::ptrdiff_t ky = 0; ky < f; ++ky) {
              for (std::ptrdiff_t kx = 0; kx < f; ++kx) {
                const std::ptrdiff_t iy = y + ky - pad;
                const std::ptrdiff_t ix = x + kx - pad;
                if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                grad_in[((n * s.in_channels + c) * s.height + iy) * s.width +
                        ix] +=
                    g * weights[((o * s.in_channels + c) * s.filter + ky) *
                                    s.filter +
                                kx];
              }
            }
          }
        }
      }
    }
  }
}

void conv_backward_params(const ConvShape& s, std::span<const double> grad_out,
                          std::span<const double> in,
                          std::span<double> grad_weights,
                          std::span<double> grad_bias) {
  std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
  const std::ptrdiff_t pad = static_cast<std::ptrdiff_t>(s.filter / 2);
  const auto h = static_cast<std::ptrdiff_t>(s.height);
  const auto w = static_cast<std::ptrdiff_t>(s.width);
  const auto f = static_cast<std::ptrdiff_t>(s.filter);
  for (std::size_t n = 0; n < s.batch; ++n) {
    for (std::size_t o = 0; o < s.out_channels; ++o) {
      for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
          const double g =
              grad_out[((n * s.out_channels + o) * s.height + y) * s.width + x];
          grad_bias[o] += g;
          for (std::size_t c = 0; c < s.in_channels; ++c) {
            for (std::ptrdiff_t ky = 0; ky < f; ++ky) {
              for (std::ptrdiff_t kx = 0; kx < f; ++kx) {
                const std::ptrdiff_t iy = y + ky - pad;
                const std::ptrdiff_t ix = x + kx - pad;
                if (iy < 0 || iy >= h || ix < 0 || ix >= w) continue;
                grad_weights[((o * s.in_channels + c) * s.filter + ky) *
                                 s.filter +
                             kx] +=
                    g * in[((n * s.in_channels + c) * s.height + iy) * s.width +
                           ix];
              }
            }
          }
        }
      }
    }
  }
}

void matern52_gram(std::span<const double> points, std::size_t dim,
                   double lengthscale, double signal_variance,
                   std::span<double> gram) {
  const std::size_t n = points.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double r = std::sqrt(
          squared_distance(&points[i * dim], &points[j * dim], dim));
      gram[i * n + j] = matern52(r, lengthscale, signal_variance);
    }
  }
}

void matern52_cross(std::span<const double> points,
                    std::span<const double> queries, std::size_t dim,
                    double lengthscale, double signal_variance,
                    std::span<double> cross) {
  const std::size_t n = points.size() / dim;
  const std::size_t q = queries.size() / dim;
  for (std::size_t a = 0; a < q; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::sqrt(
          squared_distance(&queries[a * dim], &points[i * dim], dim));
      cross[a * n + i] = matern52(r, lengthscale, signal_variance);
    }
  }
}

}  // namespace reference

// ---------------------------------------------------------------------------
// omp

namespace omp {

void dense_forward(const DenseShape& s, std::span<const double> in,
                   std::span<const double> weights, std::span<const double> bias,
                   std::span<double> out) {
  const auto total = static_cast<std::int64_t>(s.batch * s.out);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < total; ++k) {
    const std::size_t b = static_cast<std::size_t>(k) / s.out;
    const std::size_t o = static_cast<std::size_t>(k) % s.out;
    const double* x = &in[b * s.in];
    const double* wrow = &weights[o * s.in];
    double acc = bias[o];
    for (std::size_t i = 0; i < s.in; ++i) acc += x[i] * wrow[i];
    out[k] = acc;
  }
}

void dense_backward_input(const DenseShape& s, std::span<const double> grad_out,
                          std::span<const double> weights,
                          std::span<double> grad_in) {
  const auto batch = static_cast<std::int64_t>(s.batch);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < batch; ++b) {
    double* gin = &grad_in[b * s.in];
    std::fill(gin, gin + s.in, 0.0);
    for (std::size_t o = 0; o < s.out; ++o) {
      const double g = grad_out[b * s.out + o];
      const double* wrow = &weights[o * s.in];
      for (std::size_t i = 0; i < s.in; ++i) gin[i] += g * wrow[i];
    }
  }
}

void dense_backward_params(const DenseShape& s,
                           std::span<const double> grad_out,
                           std::span<const double> in,
                           std::span<double> grad_weights,
                           std::span<double> grad_bias) {
  const auto outs = static_cast<std::int64_t>(s.out);
#pragma omp parallel for schedule(static)
  for (std::int64_t o = 0; o < outs; ++o) {
    double* gw = &grad_weights[o * s.in];
    std::fill(gw, gw + s.in, 0.0);
    double gb = 0.0;
    for (std::size_t b = 0; b < s.batch; ++b) {
      const double g = grad_out[b * s.out + o];
      gb += g;
      const double* x = &in[b * s.in];
      for (std::size_t i = 0; i < s.in; ++i) gw[i] += g * x[i];
    }
    grad_bias[o] = gb;
  }
}

void conv_forward(const ConvShape& s, std::span<const double> in,
                  std::span<const double> weights, std::span<const double> bias,
                  std::span<double> out) {
  const std::size_t plane = s.height * s.width;
  const std::size_t pad = s.filter / 2;
  const auto planes = static_cast<std::int64_t>(s.batch * s.out_channels);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < planes; ++k) {
    const std::size_t n = static_cast<std::size_t>(k) / s.out_channels;
    const std::size_t o = static_cast<std::size_t>(k) % s.out_channels;
    double* dst = &out[static_cast<std::size_t>(k) * plane];
    std::fill(dst, dst + plane, bias[o]);
    for (std::size_t c = 0; c < s.in_channels; ++c) {
      const double* src = &in[(n * s.in_channels + c) * plane];
      const double* wk = &weights[(o * s.in_channels + c) * s.filter * s.filter];
      for (std::size_t ky = 0; ky < s.filter; ++ky) {
        const TapRange rows = tap_range(ky, pad, s.height);
        for (std::size_t kx = 0; kx < s.filter; ++kx) {
          const TapRange cols = tap_range(kx, pad, s.width);
          const double wv = wk[ky * s.filter + kx];
          for (std::size_t y = rows.lo; y < rows.hi; ++y) {
            const double* srow = src + (y + ky - pad) * s.width;
            double* drow = dst + y * s.width;
            for (std::size_t x = cols.lo; x < cols.hi; ++x) {
              drow[x] += srow[x + kx - pad] * wv;
            }
          }
        }
      }
    }
  }
}

void conv_backward_input(const ConvShape& s, std::span<const double> grad_out,
                         std::span<const double> weights,
                         std::span<double> grad_in) {
  const std::size_t plane = s.height * s.width;
  const std::size_t pad = s.filter / 2;
  const auto planes = static_cast<std::int64_t>(s.batch * s.in_channels);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < planes; ++k) {
    const std::size_t n = static_cast<std::size_t>(k) / s.in_channels;
    const std::size_t c = static_cast<std::size_t>(k) % s.in_channels;
    double* dst = &grad_in[static_cast<std::size_t>(k) * plane];
    std::fill(dst, dst + plane, 0.0);
    for (std::size_t o = 0; o < s.out_channels; ++o) {
      const double* g = &grad_out[(n * s.out_channels + o) * plane];
      const double* wk = &weights[(o * s.in_channels + c) * s.filter * s.filter];
      for (std::size_t ky = 0; ky < s.filter; ++ky) {
        const TapRange rows = tap_range(ky, pad, s.height);
        for (std::size_t kx = 0; kx < s.filter; ++kx) {
          const TapRange cols = tap_range(kx, pad, s.width);
          const double wv = wk[ky * s.filter + kx];
          for (std::size_t y = rows.lo; y < rows.hi; ++y) {
            double* drow = dst + (y + ky - pad) * s.width;
            const double* grow = g + y * s.width;
            for (std::size_t x = cols.lo; x < cols.hi; ++x) {
              drow[x + kx - pad] += grow[x] * wv;
            }
          }
        }
      }
    }
  }
}

void conv_backward_params(const ConvShape& s, std::span<const double> grad_out,
                          std::span<const double> in,
                          std::span<double> grad_weights,
                          std::span<double> grad_bias) {
  const std::size_t plane = s.height * s.width;
  const std::size_t pad = s.filter / 2;
  const std::size_t taps = s.filter * s.filter;
  const auto pairs = static_cast<std::int64_t>(s.out_channels * s.in_channels);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < pairs; ++k) {
    const std::size_t o = static_cast<std::size_t>(k) / s.in_channels;
    const std::size_t c = static_cast<std::size_t>(k) % s.in_channels;
    double* gw = &grad_weights[static_cast<std::size_t>(k) * taps];
    for (std::size_t ky = 0; ky < s.filter; ++ky) {
      const TapRange rows = tap_range(ky, pad, s.height);
      for (std::size_t kx = 0; kx < s.filter; ++kx) {
        const TapRange cols = tap_range(kx, pad, s.width);
        double acc = 0.0;
        for (std::size_t n = 0; n < s.batch; ++n) {
          const double* g = &grad_out[(n * s.out_channels + o) * plane];
          const double* src = &in[(n * s.in_channels + c) * plane];
          for (std::size_t y = rows.lo; y < rows.hi; ++y) {
            const double* srow = src + (y + ky - pad) * s.width;
            const double* grow = g + y * s.width;
            for (std::size_t x = cols.lo; x < cols.hi; ++x) {
              acc += grow[x] * srow[x + kx - pad];
            }
          }
        }
        gw[ky * s.filter + kx] = acc;
      }
    }
  }
  const auto outs = static_cast<std::int64_t>(s.out_channels);
#pragma omp parallel for schedule(static)
  for (std::int64_t o = 0; o < outs; ++o) {
    double acc = 0.0;
    for (std::size_t n = 0; n < s.batch; ++n) {
      const double* g = &grad_out[(n * s.out_channels + o) * plane];
      for (std::size_t p = 0; p < plane; ++p) acc += g[p];
    }
    grad_bias[o] = acc;
  }
}

void matern52_gram(std::span<const double> points, std::size_t dim,
                   double lengthscale, double signal_variance,
                   std::span<double> gram) {
  const std::size_t n = points.size() / dim;
  const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < rows; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    for (std::size_t j = ui; j < n; ++j) {
      const double r = std::sqrt(
          squared_distance(&points[ui * dim], &points[j * dim], dim));
      gram[ui * n + j] = matern52(r, lengthscale, signal_variance);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) gram[i * n + j] = gram[j * n + i];
  }
}

void matern52_cross(std::span<const double> points,
                    std::span<const double> queries, std::size_t dim,
                    double lengthscale, double signal_variance,
                    std::span<double> cross) {
  const std::size_t n = points.size() / dim;
  const auto q = static_cast<std::int64_t>(queries.size() / dim);
#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a < q; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::sqrt(
          squared_distance(&queries[ua * dim], &points[i * dim], dim));
      cross[ua * n + i] = matern52(r, lengthscale, signal_variance);
    }
  }
}

}  // namespace omp

}  // namespace sharpsearch::kernels
