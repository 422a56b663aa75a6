// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

namespace edgediffuse::simd {

/// Data-parallel double-precision kernels behind a runtime-selected table.
///
/// Every table computes the same functions; vector variants may differ from
/// the scalar reference only by summation order and fused multiply-adds.
struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// sum_i |a_i - b_i|
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();

/// AVX2+FMA table, or nullptr when not compiled in or unsupported by the CPU.
const KernelTable* avx2_kernels();

/// Table used by the library. Chosen once per process: the best supported
/// ISA unless EDGE_DIFFUSE_SIMD=scalar is set.
const KernelTable& active_kernels();

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active_kernels().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active_kernels().axpy(alpha, x.data(), y.data(), x.size());
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  return active_kernels().l1_distance(a.data(), b.data(), a.size());
}

}  // namespace edgediffuse::simd
