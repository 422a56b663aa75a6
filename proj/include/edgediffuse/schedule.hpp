// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace edgediffuse {

/// Per-step removal rates beta_t and cumulative keep probabilities
/// alpha_bar_t for a T-step edge diffusion.
///
/// Indexing is by step: beta(t) for 1 <= t <= T, alpha_bar(t) for
/// 0 <= t <= T with alpha_bar(0) == 1. `p` is the edge probability of the
/// convergent Erdos-Renyi law; the edge-removal process uses p == 0.
class NoiseSchedule {
 public:
  /// alpha_bar_t = (T - t) / T, hence beta_t = 1 / (T - t + 1).
  static NoiseSchedule linear(int steps);

  /// Arbitrary schedule from alpha_bar_1..alpha_bar_T (alpha_bar_0 = 1 is
  /// implied). Values must lie in [0, 1] and be nonincreasing.
  static NoiseSchedule from_alpha_bar(const std::vector<double>& alpha_bar_1_to_T, double p = 0.0);

  int steps() const { return steps_; }
  double p() const { return p_; }
  double beta(int t) const;
  double alpha_bar(int t) const;
  /// True when alpha_bar_T == 0, i.e. A^T is the empty graph almost surely.
  bool absorbing() const { return alpha_bar_.back() == 0.0; }

 private:
  NoiseSchedule() = default;
  int steps_ = 0;
  double p_ = 0.0;
  std::vector<double> beta_;       // beta_[0] unused (0)
  std::vector<double> alpha_bar_;  // alpha_bar_[0] == 1
};

/// Probability that an edge removed by step t was still present at t-1:
/// beta_t * alpha_bar_{t-1} / (1 - alpha_bar_t).
double gamma(const NoiseSchedule& s, int t);

/// Analytic total edge count over a trajectory, sum_{t=1}^T E[M^t].
double expected_message_ops(double initial_edges, int num_nodes, const NoiseSchedule& s);

}  // namespace edgediffuse
