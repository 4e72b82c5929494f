// Copyright 2026 The Lumen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reference kernels: plain left-to-right loops, no reassociation.

#include "lumen/simd/kernels.hpp"

namespace lumen::simd {

namespace {

double DotScalar(const double* x, const double* y, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += x[i] * y[i];
  return sum;
}

void AxpyScalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void XpbyScalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void SpmvCsrScalar(std::size_t nrows, const std::size_t* row_offsets,
                   const std::int32_t* col_indices, const double* values,
                   const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    double sum = 0.0;
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      sum += values[k] * x[col_indices[k]];
    }
    y[r] = sum;
  }
}

double WeightedSsdScalar(const double* a, const double* b, const double* w,
                         std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    sum += w[i] * d * d;
  }
  return sum;
}

}  // namespace

namespace detail {
const KernelTable kScalarKernels = {
    Backend::kScalar, DotScalar,     AxpyScalar,
    XpbyScalar,       SpmvCsrScalar, WeightedSsdScalar,
};
}  // namespace detail

}  // namespace lumen::simd
