// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "edgediffuse/checkpoint.hpp"
#include "edgediffuse/denoiser.hpp"
#include "edgediffuse/graph.hpp"
#include "edgediffuse/rng.hpp"
#include "edgediffuse/schedule.hpp"

namespace edgediffuse {

struct TrainConfig {
  int epochs = 20;
  int steps_per_epoch = 100;
  double learning_rate = 1e-3;
  double momentum = 0.9;
  double clip_norm = 5.0;
  int negative_cap_factor = 20;
  std::uint64_t seed = 0;
  int checkpoint_every = 0;  // epochs between periodic checkpoints; 0 disables
  Architecture arch;
  bool train_selection = false;

  void validate() const;
};

/// Cross-entropy terms of one transition. The reconstruction term is the t=1
/// case of the edge term: edge_term carries it, rec_term repeats it for t=1.
struct LossBreakdown {
  int t = 0;
  double edge_term = 0.0;
  double node_term = 0.0;
  double rec_term = 0.0;
  bool skipped = false;
  bool updated = false;
};

/// Weights plus the optimizer's momentum buffer.
struct OptimizerState {
  ModelParams params;
  ModelParams velocity;
};

/// One step of the training procedure on A^0. `rng` drives t, the forward
/// noise and negative subsampling.
LossBreakdown train_step(const Graph& a0, const DegreeVector& d0, const NoiseSchedule& s,
                         OptimizerState& opt, const TrainConfig& cfg, SeededRng& rng);

/// SGD with momentum after global norm clipping.
void apply_update(OptimizerState& opt, ModelParams grad, const TrainConfig& cfg);

/// KL(Bern(q) || Bern(p)) with p clamped to [eps, 1 - eps].
double kl_bernoulli(double q, double p, double eps = 1e-7);

struct VlbEstimate {
  std::size_t samples = 0;
  double prior_term = 0.0;  // exactly 0 for an absorbing schedule
  double edge_term = 0.0;   // sum over t = 1..T, includes the reconstruction term
  double edge_se = 0.0;
  double rec_term = 0.0;    // t = 1 part of edge_term
  double rec_se = 0.0;
  double node_term = 0.0;   // 0 under degree guidance
  double total() const { return prior_term + edge_term + node_term; }
};

/// Monte Carlo estimate of the negative lower bound -log p(A^0 | d^0)
/// (cross-entropy form) over n_samples full forward trajectories.
VlbEstimate vlb_estimate(const Graph& a0, const DegreeVector& d0, const NoiseSchedule& s,
                         const ModelParams& params, std::size_t n_samples, SeededRng& rng);

struct EpochSummary {
  int epoch = 0;
  double mean_edge_term = 0.0;
  double mean_node_term = 0.0;
  double mean_rec_term = 0.0;
  int steps = 0;
  int skipped = 0;
};

struct TrainingResult {
  std::filesystem::path final_checkpoint;
  std::vector<LossBreakdown> steps;  // steps run by this call
  std::vector<EpochSummary> epochs;
};

/// Drives train_step over cfg.epochs epochs. Writes train_log.csv,
/// epoch_log.csv, periodic checkpoints and model.ckpt into out_dir. When
/// `resume` carries a training state, continues from it.
TrainingResult run_training(const GraphDataset& ds, const TrainConfig& cfg, const NoiseSchedule& s,
                            const std::filesystem::path& out_dir,
                            const std::optional<Checkpoint>& resume = std::nullopt);

}  // namespace edgediffuse
