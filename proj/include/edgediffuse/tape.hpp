// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "edgediffuse/graph.hpp"
#include "edgediffuse/linalg.hpp"

namespace edgediffuse {

/// Handle to a value recorded on a GradTape.
struct Var {
  int id = -1;
};

/// Minimal reverse-mode differentiation over dense matrices.
///
/// Every op appends a node holding its forward value and a closure that
/// pushes the node's adjoint to its inputs. Nodes are appended in
/// topological order, so backward() is a single reverse sweep. Parameter
/// leaves carry a sink matrix that receives their final adjoint.
class GradTape {
 public:
  /// Differentiable leaf; the adjoint is added into *sink on backward().
  Var parameter(const Matrix& value, Matrix* sink);
  Var constant(Matrix value);

  const Matrix& value(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].value; }
  std::size_t size() const { return nodes_.size(); }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  /// a (r x c) plus row vector b (1 x c) on every row.
  Var add_row(Var a, Var b);
  Var tanh(Var a);
  Var concat_cols(Var a, Var b);
  Var gather_rows(Var table, std::vector<int> rows);
  /// Row i becomes the sum of rows j over neighbors j of i. `g` must outlive the tape.
  Var neighbor_sum(Var a, const Graph& g);
  /// 1 x c mean of the rows.
  Var mean_rows(Var a);
  /// Row k becomes a[i_k] + a[j_k].
  Var pair_sum(Var a, std::vector<Edge> pairs);
  /// Weighted Bernoulli cross-entropy of sigmoid(logits) against 0/1 targets,
  /// probabilities clamped to [eps, 1 - eps]. Returns a 1 x 1 sum.
  Var bce_with_logits(Var logits, std::vector<double> targets, std::vector<double> weights,
                      double eps);
  /// Sum of 1 x 1 values.
  Var add_scalars(Var a, Var b);

  /// Reverse sweep from a 1 x 1 root.
  void backward(Var root);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Matrix* sink = nullptr;
    std::function<void(GradTape&, int)> pull;
  };

  Var push(Matrix value, bool requires_grad, std::function<void(GradTape&, int)> pull);
  bool needs_grad(Var v) const { return nodes_[static_cast<std::size_t>(v.id)].requires_grad; }
  Matrix& grad(int id);
  Matrix& grad(Var v) { return grad(v.id); }

  std::vector<Node> nodes_;
};

double sigmoid(double x);

}  // namespace edgediffuse
