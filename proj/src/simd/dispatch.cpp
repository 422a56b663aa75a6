// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string_view>

#include "edgediffuse/simd.hpp"
#include "kernels.hpp"

namespace edgediffuse::simd {

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", detail::dot_scalar, detail::axpy_scalar,
                                 detail::l1_distance_scalar};
  return table;
}

const KernelTable* avx2_kernels() {
#if defined(EDGE_DIFFUSE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  }();
  static const KernelTable table{"avx2", detail::dot_avx2, detail::axpy_avx2,
                                 detail::l1_distance_avx2};
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* forced = std::getenv("EDGE_DIFFUSE_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
    if (const KernelTable* avx2 = avx2_kernels()) return *avx2;
    return scalar_kernels();
  }();
  return table;
}

}  // namespace edgediffuse::simd
