// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

namespace edgediffuse::simd::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
double l1_distance_scalar(const double* a, const double* b, std::size_t n);

#ifdef EDGE_DIFFUSE_HAVE_AVX2
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
double l1_distance_avx2(const double* a, const double* b, std::size_t n);
#endif

}  // namespace edgediffuse::simd::detail
