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

#include <atomic>
#include <cstdlib>
#include <string>

#include "lumen/error.hpp"
#include "lumen/simd/kernels.hpp"

namespace lumen::simd {

namespace {

bool CpuHasAvx2Fma() {
#if defined(LUMEN_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* SelectAtStartup() {
  const char* forced = std::getenv("LUMEN_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") {
    return &detail::kScalarKernels;
  }
#if defined(LUMEN_HAVE_AVX2)
  if (CpuHasAvx2Fma()) return &detail::kAvx2Kernels;
#endif
  return &detail::kScalarKernels;
}

std::atomic<const KernelTable*>& ActiveSlot() {
  static std::atomic<const KernelTable*> slot{SelectAtStartup()};
  return slot;
}

}  // namespace

std::string_view BackendName(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
  }
  return "unknown";
}

bool BackendSupported(Backend backend) {
  switch (backend) {
    case Backend::kScalar: return true;
    case Backend::kAvx2: return CpuHasAvx2Fma();
  }
  return false;
}

const KernelTable& Kernels(Backend backend) {
  if (!BackendSupported(backend)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SIMD backend " + std::string(BackendName(backend)) +
                    " is not available on this build or CPU");
  }
#if defined(LUMEN_HAVE_AVX2)
  if (backend == Backend::kAvx2) return detail::kAvx2Kernels;
#endif
  return detail::kScalarKernels;
}

const KernelTable& Active() {
  return *ActiveSlot().load(std::memory_order_relaxed);
}

void SetBackend(Backend backend) {
  ActiveSlot().store(&Kernels(backend), std::memory_order_relaxed);
}

}  // namespace lumen::simd
