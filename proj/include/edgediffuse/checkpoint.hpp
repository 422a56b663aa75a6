// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "edgediffuse/degree_model.hpp"
#include "edgediffuse/denoiser.hpp"

namespace edgediffuse {

/// Optimizer position saved alongside the weights so training can resume.
struct TrainingState {
  std::int64_t step = 0;  // global steps completed
  int epoch = 0;          // epochs completed
  ModelParams momentum;
};

struct Checkpoint {
  ModelParams params;
  std::optional<DegreePrior> prior;
  std::optional<TrainingState> state;
};

/// Layout (all integers little-endian):
///   "EDGECKPT" | u32 version | u32 section count
///   per section: 4-byte tag | u64 payload length | payload
/// Sections: ARCH, PARM, PRIO (optional), TRNS (optional).
std::string checkpoint_to_bytes(const Checkpoint& ckpt);
Checkpoint checkpoint_from_bytes(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace edgediffuse
