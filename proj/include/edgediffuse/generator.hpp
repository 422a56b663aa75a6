// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "edgediffuse/degree_model.hpp"
#include "edgediffuse/denoiser.hpp"
#include "edgediffuse/graph.hpp"
#include "edgediffuse/rng.hpp"
#include "edgediffuse/schedule.hpp"

namespace edgediffuse {

struct StepRecord {
  int t = 0;
  int active = 0;                  // K_t
  std::size_t input_edges = 0;     // |edges(A^t)|
  std::size_t edges_added = 0;
  std::size_t cumulative_edges = 0;  // |edges(A^{t-1})|
  std::size_t predicted_pairs = 0;
  std::size_t message_ops = 0;
};

struct GenerationTrace {
  std::vector<StepRecord> steps;  // t = T..1
  DegreeVector target_degrees;    // empty in learned-selection mode
  Graph final_graph;
  double seconds = 0.0;
};

struct GenerationOptions {
  /// Upper bound on K_t; 0 disables. Larger draws are rejected and redrawn,
  /// then truncated to a random subset.
  int max_active = 0;
};

enum class GenerationMode { degree_guided, learned_selection };

/// Reverse process conditioned on d^0 ~ prior. New edges between co-active
/// nodes are accepted only while both endpoints remain below their target
/// degree, and edges of A^t are kept, so deg(A^t) <= d^0 at every step.
GenerationTrace generate_degree_guided(const ModelParams& params, const DegreePrior& prior,
                                       const NoiseSchedule& s, SeededRng& rng,
                                       const GenerationOptions& options = {});

/// Same process with d^0 given explicitly.
GenerationTrace generate_from_degrees(const ModelParams& params, const DegreeVector& d0,
                                      const NoiseSchedule& s, SeededRng& rng,
                                      const GenerationOptions& options = {});

/// Reverse process with s^t drawn from the node-selection head.
GenerationTrace generate_learned_selection(const ModelParams& params, int n, const NoiseSchedule& s,
                                           SeededRng& rng, const GenerationOptions& options = {});

struct GenerationBatch {
  GraphDataset graphs;
  std::vector<GenerationTrace> traces;
};

/// `count` independent samples on child streams of `rng`. In
/// learned-selection mode the node count is drawn from the prior.
GenerationBatch generate_batch(const ModelParams& params, const DegreePrior& prior,
                               const NoiseSchedule& s, std::size_t count, const SeededRng& rng,
                               GenerationMode mode = GenerationMode::degree_guided,
                               const GenerationOptions& options = {}, int threads = 0);

}  // namespace edgediffuse
