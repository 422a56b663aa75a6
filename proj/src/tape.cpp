// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "edgediffuse/simd.hpp"

namespace edgediffuse {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Var GradTape::push(Matrix value, bool requires_grad, std::function<void(GradTape&, int)> pull) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.pull = std::move(pull);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Matrix& GradTape::grad(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.grad.size() == 0 && n.value.size() != 0) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

Var GradTape::parameter(const Matrix& value, Matrix* sink) {
  Var v = push(value, sink != nullptr, nullptr);
  nodes_.back().sink = sink;
  return v;
}

Var GradTape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var GradTape::matmul(Var a, Var b) {
  const bool rg = needs_grad(a) || needs_grad(b);
  return push(edgediffuse::matmul(value(a), value(b)), rg, [a, b](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    if (tp.needs_grad(a)) matmul_a_bt_acc(g, tp.value(b), tp.grad(a));
    if (tp.needs_grad(b)) matmul_at_b_acc(tp.value(a), g, tp.grad(b));
  });
}

Var GradTape::add(Var a, Var b) {
  if (!value(a).same_shape(value(b))) throw std::invalid_argument("tape add: shape mismatch");
  Matrix out = value(a);
  add_scaled(out, 1.0, value(b));
  return push(std::move(out), needs_grad(a) || needs_grad(b), [a, b](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    if (tp.needs_grad(a)) add_scaled(tp.grad(a), 1.0, g);
    if (tp.needs_grad(b)) add_scaled(tp.grad(b), 1.0, g);
  });
}

Var GradTape::add_row(Var a, Var b) {
  const Matrix& va = value(a);
  const Matrix& vb = value(b);
  if (vb.rows() != 1 || vb.cols() != va.cols()) {
    throw std::invalid_argument("tape add_row: expected a 1 x cols row vector");
  }
  Matrix out = va;
  const auto& k = simd::active_kernels();
  for (int r = 0; r < out.rows(); ++r) {
    k.axpy(1.0, vb.data().data(), out.row(r).data(), static_cast<std::size_t>(out.cols()));
  }
  return push(std::move(out), needs_grad(a) || needs_grad(b), [a, b](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    if (tp.needs_grad(a)) add_scaled(tp.grad(a), 1.0, g);
    if (tp.needs_grad(b)) {
      Matrix& gb = tp.grad(b);
      const auto& kk = simd::active_kernels();
      for (int r = 0; r < g.rows(); ++r) {
        kk.axpy(1.0, g.row(r).data(), gb.data().data(), static_cast<std::size_t>(g.cols()));
      }
    }
  });
}

Var GradTape::tanh(Var a) {
  Matrix out = value(a);
  for (double& x : out.data()) x = std::tanh(x);
  return push(std::move(out), needs_grad(a), [a](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    const Matrix& y = tp.value(Var{self});
    Matrix& ga = tp.grad(a);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga.data()[i] += g.data()[i] * (1.0 - y.data()[i] * y.data()[i]);
    }
  });
}

Var GradTape::concat_cols(Var a, Var b) {
  const Matrix& va = value(a);
  const Matrix& vb = value(b);
  if (va.rows() != vb.rows()) throw std::invalid_argument("tape concat_cols: row mismatch");
  Matrix out(va.rows(), va.cols() + vb.cols());
  for (int r = 0; r < out.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(va.row(r).begin(), va.row(r).end(), dst.begin());
    std::copy(vb.row(r).begin(), vb.row(r).end(), dst.begin() + va.cols());
  }
  return push(std::move(out), needs_grad(a) || needs_grad(b), [a, b](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    const int ca = tp.value(a).cols();
    for (int r = 0; r < g.rows(); ++r) {
      auto gr = g.row(r);
      if (tp.needs_grad(a)) {
        auto dst = tp.grad(a).row(r);
        for (int c = 0; c < ca; ++c) dst[static_cast<std::size_t>(c)] += gr[static_cast<std::size_t>(c)];
      }
      if (tp.needs_grad(b)) {
        auto dst = tp.grad(b).row(r);
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += gr[static_cast<std::size_t>(ca) + c];
      }
    }
  });
}

Var GradTape::gather_rows(Var table, std::vector<int> rows) {
  const Matrix& vt = value(table);
  Matrix out(static_cast<int>(rows.size()), vt.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= vt.rows()) throw std::out_of_range("tape gather_rows");
    auto src = vt.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(static_cast<int>(r)).begin());
  }
  return push(std::move(out), needs_grad(table),
              [table, rows = std::move(rows)](GradTape& tp, int self) {
                const Matrix& g = tp.grad(self);
                Matrix& gt = tp.grad(table);
                const auto& k = simd::active_kernels();
                for (std::size_t r = 0; r < rows.size(); ++r) {
                  k.axpy(1.0, g.row(static_cast<int>(r)).data(), gt.row(rows[r]).data(),
                         static_cast<std::size_t>(g.cols()));
                }
              });
}

namespace {

Matrix neighbor_sum_value(const Matrix& x, const Graph& g) {
  Matrix out(x.rows(), x.cols());
  const auto& k = simd::active_kernels();
  const auto cols = static_cast<std::size_t>(x.cols());
  for (const Edge& e : g.edges()) {
    k.axpy(1.0, x.row(e.v).data(), out.row(e.u).data(), cols);
    k.axpy(1.0, x.row(e.u).data(), out.row(e.v).data(), cols);
  }
  return out;
}

}  // namespace

Var GradTape::neighbor_sum(Var a, const Graph& g) {
  if (value(a).rows() != g.num_nodes()) {
    throw std::invalid_argument("tape neighbor_sum: row count differs from node count");
  }
  const Graph* graph = &g;
  return push(neighbor_sum_value(value(a), g), needs_grad(a), [a, graph](GradTape& tp, int self) {
    // The aggregation operator is symmetric, so its adjoint is itself.
    add_scaled(tp.grad(a), 1.0, neighbor_sum_value(tp.grad(self), *graph));
  });
}

Var GradTape::mean_rows(Var a) {
  const Matrix& va = value(a);
  Matrix out(1, va.cols());
  if (va.rows() > 0) {
    const auto& k = simd::active_kernels();
    const double w = 1.0 / va.rows();
    for (int r = 0; r < va.rows(); ++r) {
      k.axpy(w, va.row(r).data(), out.data().data(), static_cast<std::size_t>(va.cols()));
    }
  }
  return push(std::move(out), needs_grad(a), [a](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    Matrix& ga = tp.grad(a);
    if (ga.rows() == 0) return;
    const auto& k = simd::active_kernels();
    const double w = 1.0 / ga.rows();
    for (int r = 0; r < ga.rows(); ++r) {
      k.axpy(w, g.data().data(), ga.row(r).data(), static_cast<std::size_t>(g.cols()));
    }
  });
}

Var GradTape::pair_sum(Var a, std::vector<Edge> pairs) {
  const Matrix& va = value(a);
  Matrix out(static_cast<int>(pairs.size()), va.cols());
  const auto& k = simd::active_kernels();
  const auto cols = static_cast<std::size_t>(va.cols());
  for (std::size_t r = 0; r < pairs.size(); ++r) {
    double* dst = out.row(static_cast<int>(r)).data();
    k.axpy(1.0, va.row(pairs[r].u).data(), dst, cols);
    k.axpy(1.0, va.row(pairs[r].v).data(), dst, cols);
  }
  return push(std::move(out), needs_grad(a), [a, pairs = std::move(pairs)](GradTape& tp, int self) {
    const Matrix& g = tp.grad(self);
    Matrix& ga = tp.grad(a);
    const auto& kk = simd::active_kernels();
    const auto c = static_cast<std::size_t>(g.cols());
    for (std::size_t r = 0; r < pairs.size(); ++r) {
      const double* src = g.row(static_cast<int>(r)).data();
      kk.axpy(1.0, src, ga.row(pairs[r].u).data(), c);
      kk.axpy(1.0, src, ga.row(pairs[r].v).data(), c);
    }
  });
}

Var GradTape::bce_with_logits(Var logits, std::vector<double> targets,
                              std::vector<double> weights, double eps) {
  const Matrix& x = value(logits);
  if (x.cols() != 1 || static_cast<std::size_t>(x.rows()) != targets.size() ||
      targets.size() != weights.size()) {
    throw std::invalid_argument("tape bce_with_logits: shape mismatch");
  }
  double total = 0.0;
  std::vector<double> dlogit(targets.size(), 0.0);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double p = sigmoid(x.data()[i]);
    const double pc = std::clamp(p, eps, 1.0 - eps);
    const double y = targets[i];
    total -= weights[i] * (y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
    // The clamp has zero derivative outside [eps, 1 - eps].
    if (p > eps && p < 1.0 - eps) dlogit[i] = weights[i] * (p - y);
  }
  Matrix out(1, 1, total);
  return push(std::move(out), needs_grad(logits),
              [logits, dlogit = std::move(dlogit)](GradTape& tp, int self) {
                const double g = tp.grad(self)(0, 0);
                Matrix& gx = tp.grad(logits);
                for (std::size_t i = 0; i < dlogit.size(); ++i) gx.data()[i] += g * dlogit[i];
              });
}

Var GradTape::add_scalars(Var a, Var b) {
  Matrix out(1, 1, value(a)(0, 0) + value(b)(0, 0));
  return push(std::move(out), needs_grad(a) || needs_grad(b), [a, b](GradTape& tp, int self) {
    const double g = tp.grad(self)(0, 0);
    if (tp.needs_grad(a)) tp.grad(a)(0, 0) += g;
    if (tp.needs_grad(b)) tp.grad(b)(0, 0) += g;
  });
}

void GradTape::backward(Var root) {
  const Matrix& rv = value(root);
  if (rv.rows() != 1 || rv.cols() != 1) throw std::invalid_argument("backward: root must be 1 x 1");
  if (!needs_grad(root)) return;
  grad(root)(0, 0) = 1.0;
  for (int id = root.id; id >= 0; --id) {
    Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.pull) n.pull(*this, id);
    if (n.sink != nullptr) add_scaled(*n.sink, 1.0, n.grad);
  }
}

}  // namespace edgediffuse
