// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "edgediffuse/tape.hpp"

using namespace edgediffuse;

namespace {

// Central-difference check of d f / d x against the tape's adjoint.
void check_gradient(Matrix x, const std::function<Var(GradTape&, Var)>& build) {
  Matrix grad(x.rows(), x.cols());
  {
    GradTape tape;
    Var root = build(tape, tape.parameter(x, &grad));
    tape.backward(root);
  }
  const double h = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x.data()[i];
    x.data()[i] = keep + h;
    GradTape up;
    const double fu = up.value(build(up, up.constant(x)))(0, 0);
    x.data()[i] = keep - h;
    GradTape dn;
    const double fd = dn.value(build(dn, dn.constant(x)))(0, 0);
    x.data()[i] = keep;
    const double numeric = (fu - fd) / (2 * h);
    CHECK(std::abs(grad.data()[i] - numeric) <= 1e-6 + 1e-4 * std::abs(numeric));
  }
}

Matrix random_matrix(int r, int c, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(r, c);
  for (double& v : m.data()) v = u(gen);
  return m;
}

}  // namespace

TEST_CASE("sigmoid is stable at extreme inputs") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(-1000.0) == 0.0);
  CHECK(sigmoid(1000.0) == 1.0);
  CHECK(std::isfinite(sigmoid(-745.0)));
}

TEST_CASE("each tape op backpropagates the finite-difference gradient") {
  const Matrix w = random_matrix(3, 1, 5);
  const Matrix row = random_matrix(1, 3, 6);
  const Graph g(4, {{0, 1}, {1, 2}, {1, 3}});
  auto reduce = [&](GradTape& tp, Var v) {
    // Squash to a scalar through a BCE head so every op sees a nontrivial adjoint.
    Var logits = tp.matmul(v, tp.constant(random_matrix(tp.value(v).cols(), 1, 9)));
    std::vector<double> y(static_cast<std::size_t>(tp.value(logits).rows()));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i % 2);
    return tp.bce_with_logits(logits, y, std::vector<double>(y.size(), 1.5), 1e-9);
  };
  SUBCASE("matmul") {
    check_gradient(random_matrix(4, 3, 1), [&](GradTape& tp, Var x) {
      return reduce(tp, tp.matmul(x, tp.constant(random_matrix(3, 2, 2))));
    });
  }
  SUBCASE("tanh and add_row") {
    check_gradient(random_matrix(4, 3, 3), [&](GradTape& tp, Var x) {
      return reduce(tp, tp.tanh(tp.add_row(x, tp.constant(row))));
    });
  }
  SUBCASE("neighbor_sum, mean_rows and concat") {
    check_gradient(random_matrix(4, 3, 4), [&](GradTape& tp, Var x) {
      Var m = tp.mean_rows(tp.neighbor_sum(x, g));
      return reduce(tp, tp.concat_cols(m, tp.tanh(m)));
    });
  }
  SUBCASE("gather_rows and pair_sum") {
    check_gradient(random_matrix(4, 3, 7), [&](GradTape& tp, Var x) {
      Var rows = tp.gather_rows(x, {2, 0, 2, 3});
      return reduce(tp, tp.pair_sum(rows, {{0, 1}, {1, 2}, {0, 3}}));
    });
  }
  SUBCASE("add and add_scalars") {
    check_gradient(random_matrix(4, 3, 8), [&](GradTape& tp, Var x) {
      Var a = reduce(tp, tp.add(x, tp.tanh(x)));
      Var b = reduce(tp, tp.matmul(x, tp.constant(w)));
      return tp.add_scalars(a, b);
    });
  }
}

TEST_CASE("clamped cross-entropy has zero gradient where the clamp is active") {
  Matrix x(2, 1);
  x(0, 0) = 50.0;   // p rounds past 1 - eps
  x(1, 0) = -50.0;
  Matrix grad(2, 1);
  GradTape tp;
  Var root = tp.bce_with_logits(tp.parameter(x, &grad), {0.0, 1.0}, {1.0, 1.0}, 1e-7);
  tp.backward(root);
  CHECK(tp.value(root)(0, 0) == doctest::Approx(-2 * std::log(1e-7)));
  CHECK(grad(0, 0) == 0.0);
  CHECK(grad(1, 0) == 0.0);
}

TEST_CASE("shape errors are reported") {
  GradTape tp;
  Var a = tp.constant(Matrix(2, 3));
  CHECK_THROWS(tp.add(a, tp.constant(Matrix(3, 2))));
  CHECK_THROWS(tp.add_row(a, tp.constant(Matrix(2, 3))));
  CHECK_THROWS(tp.backward(a));
  CHECK_THROWS(tp.gather_rows(a, {5}));
}
