// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/schedule.hpp"

#include <stdexcept>
#include <string>

namespace edgediffuse {

NoiseSchedule NoiseSchedule::linear(int steps) {
  if (steps < 1) throw std::invalid_argument("linear schedule needs T >= 1");
  NoiseSchedule s;
  s.steps_ = steps;
  s.alpha_bar_.resize(static_cast<std::size_t>(steps) + 1);
  s.beta_.assign(static_cast<std::size_t>(steps) + 1, 0.0);
  const double T = steps;
  for (int t = 0; t <= steps; ++t) s.alpha_bar_[static_cast<std::size_t>(t)] = (T - t) / T;
  for (int t = 1; t <= steps; ++t) {
    s.beta_[static_cast<std::size_t>(t)] = 1.0 / static_cast<double>(steps - t + 1);
  }
  return s;
}

NoiseSchedule NoiseSchedule::from_alpha_bar(const std::vector<double>& alpha_bar_1_to_T,
                                            double p) {
  if (alpha_bar_1_to_T.empty()) throw std::invalid_argument("schedule needs T >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("schedule: p outside [0,1]");
  NoiseSchedule s;
  s.steps_ = static_cast<int>(alpha_bar_1_to_T.size());
  s.p_ = p;
  s.alpha_bar_.push_back(1.0);
  s.beta_.push_back(0.0);
  for (double a : alpha_bar_1_to_T) {
    const double prev = s.alpha_bar_.back();
    if (!(a >= 0.0 && a <= prev)) {
      throw std::invalid_argument("schedule: alpha_bar must be nonincreasing within [0,1]");
    }
    // A zero predecessor makes beta arbitrary; report a full removal step.
    s.beta_.push_back(prev > 0.0 ? 1.0 - a / prev : 1.0);
    s.alpha_bar_.push_back(a);
  }
  return s;
}

double NoiseSchedule::beta(int t) const {
  if (t < 1 || t > steps_) throw std::out_of_range("beta: step " + std::to_string(t));
  return beta_[static_cast<std::size_t>(t)];
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t < 0 || t > steps_) throw std::out_of_range("alpha_bar: step " + std::to_string(t));
  return alpha_bar_[static_cast<std::size_t>(t)];
}

double gamma(const NoiseSchedule& s, int t) {
  if (t < 1 || t > s.steps()) throw std::out_of_range("gamma: step " + std::to_string(t));
  const double denom = 1.0 - s.alpha_bar(t);
  if (denom <= 0.0) {
    throw std::domain_error("gamma: alpha_bar_t == 1 at step " + std::to_string(t) +
                            " (degenerate schedule)");
  }
  return s.beta(t) * s.alpha_bar(t - 1) / denom;
}

double expected_message_ops(double initial_edges, int num_nodes, const NoiseSchedule& s) {
  double kept = 0.0;
  double resampled = 0.0;
  for (int t = 1; t <= s.steps(); ++t) {
    kept += s.alpha_bar(t);
    resampled += 1.0 - s.alpha_bar(t);
  }
  const double pairs = 0.5 * static_cast<double>(num_nodes) * (num_nodes - 1);
  return initial_edges * kept + pairs * s.p() * resampled;
}

}  // namespace edgediffuse
