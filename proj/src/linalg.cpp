// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/linalg.hpp"

#include <algorithm>
#include <stdexcept>

#include "edgediffuse/simd.hpp"

namespace edgediffuse {

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  const auto& k = simd::active_kernels();
  for (int i = 0; i < a.rows(); ++i) {
    double* out = c.row(i).data();
    for (int p = 0; p < a.cols(); ++p) {
      const double coef = a(i, p);
      if (coef != 0.0) k.axpy(coef, b.row(p).data(), out, static_cast<std::size_t>(b.cols()));
    }
  }
  return c;
}

void matmul_at_b_acc(const Matrix& a, const Matrix& g, Matrix& out) {
  if (a.rows() != g.rows() || out.rows() != a.cols() || out.cols() != g.cols()) {
    throw std::invalid_argument("matmul_at_b_acc: shape mismatch");
  }
  const auto& k = simd::active_kernels();
  for (int i = 0; i < a.rows(); ++i) {
    const double* gi = g.row(i).data();
    for (int p = 0; p < a.cols(); ++p) {
      const double coef = a(i, p);
      if (coef != 0.0) k.axpy(coef, gi, out.row(p).data(), static_cast<std::size_t>(g.cols()));
    }
  }
}

void matmul_a_bt_acc(const Matrix& g, const Matrix& b, Matrix& out) {
  if (g.cols() != b.cols() || out.rows() != g.rows() || out.cols() != b.rows()) {
    throw std::invalid_argument("matmul_a_bt_acc: shape mismatch");
  }
  const auto& k = simd::active_kernels();
  for (int i = 0; i < g.rows(); ++i) {
    for (int p = 0; p < b.rows(); ++p) {
      out(i, p) += k.dot(g.row(i).data(), b.row(p).data(), static_cast<std::size_t>(g.cols()));
    }
  }
}

void add_scaled(Matrix& y, double alpha, const Matrix& x) {
  if (!y.same_shape(x)) throw std::invalid_argument("add_scaled: shape mismatch");
  simd::active_kernels().axpy(alpha, x.data().data(), y.data().data(), y.size());
}

double squared_norm(const Matrix& m) {
  return simd::active_kernels().dot(m.data().data(), m.data().data(), m.size());
}

}  // namespace edgediffuse
