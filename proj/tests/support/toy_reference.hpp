// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

// The reference toy run: 24-node two-community graph, T = 32.

#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "edgediffuse/graph.hpp"
#include "edgediffuse/trainer.hpp"

namespace oracle {

inline std::filesystem::path data_dir() { return EDGE_DIFFUSE_DATA_DIR; }

inline constexpr int kToySteps = 32;

inline edgediffuse::TrainConfig toy_config() {
  edgediffuse::TrainConfig cfg;
  cfg.epochs = 20;
  cfg.steps_per_epoch = 500;
  cfg.learning_rate = 1e-3;
  cfg.arch.hidden = 16;
  cfg.arch.layers = 2;
  cfg.seed = 7;
  return cfg;
}

inline edgediffuse::GraphDataset toy_dataset() {
  return {"toy", {edgediffuse::load_edge_list(data_dir() / "toy_community.el")}};
}

/// Mann-Kendall S statistic normalized to z (no tie correction; epoch means
/// are continuous).
inline double mann_kendall_z(const std::vector<double>& x) {
  const double n = static_cast<double>(x.size());
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) s += (x[j] > x[i]) - (x[j] < x[i]);
  }
  const double var = n * (n - 1) * (2 * n + 5) / 18.0;
  if (s > 0) return (s - 1) / std::sqrt(var);
  if (s < 0) return (s + 1) / std::sqrt(var);
  return 0.0;
}

}  // namespace oracle
