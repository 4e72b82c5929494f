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

#ifndef LUMEN_SIMD_KERNELS_HPP_
#define LUMEN_SIMD_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

// Arithmetic inner loops shared by the solvers and the exemplar search.
//
// Every kernel has a scalar reference implementation and, where the build
// and CPU allow it, an AVX2/FMA variant. The variant is picked once at first
// use; set LUMEN_SIMD=scalar in the environment to force the reference path.
// Variants differ from the reference only in summation order and fused
// multiply-add rounding, so results agree to a few ulps per term rather than
// bitwise. Within one process the choice is fixed, which keeps every
// computation reproducible run to run.

namespace lumen::simd {

enum class Backend { kScalar, kAvx2 };

struct KernelTable {
  Backend backend;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  // y = A x for CSR A
  void (*spmv_csr)(std::size_t nrows, const std::size_t* row_offsets,
                   const std::int32_t* col_indices, const double* values,
                   const double* x, double* y);
  // sum_i w_i (a_i - b_i)^2
  double (*weighted_ssd)(const double* a, const double* b, const double* w,
                         std::size_t n);
};

std::string_view BackendName(Backend backend);
bool BackendSupported(Backend backend);

/// Kernel table for a specific backend; throws if it is not supported here.
const KernelTable& Kernels(Backend backend);
/// Currently selected kernel table.
const KernelTable& Active();
/// Overrides the runtime selection (tests and benchmarks).
void SetBackend(Backend backend);

inline double Dot(std::span<const double> x, std::span<const double> y) {
  return Active().dot(x.data(), y.data(), x.size());
}
inline void Axpy(double a, std::span<const double> x, std::span<double> y) {
  Active().axpy(a, x.data(), y.data(), x.size());
}
inline void Xpby(std::span<const double> x, double b, std::span<double> y) {
  Active().xpby(x.data(), b, y.data(), x.size());
}
inline double WeightedSsd(std::span<const double> a, std::span<const double> b,
                          std::span<const double> w) {
  return Active().weighted_ssd(a.data(), b.data(), w.data(), a.size());
}

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(LUMEN_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
}  // namespace detail

}  // namespace lumen::simd

#endif  // LUMEN_SIMD_KERNELS_HPP_
