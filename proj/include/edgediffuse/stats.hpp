// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgediffuse/graph.hpp"
#include "edgediffuse/rng.hpp"
#include "edgediffuse/schedule.hpp"

namespace edgediffuse {

struct StatsReport {
  double ple = 0.0;
  double ntc = 0.0;
  double cc = 0.0;
  double cpl = 0.0;
  double ac = 0.0;
  double eo = 0.0;
  std::int64_t triangles = 0;

  bool ple_valid = false;
  bool ntc_valid = false;
  bool cc_valid = false;
  bool cpl_valid = false;
  bool ac_valid = false;
  bool eo_valid = false;
  /// Path lengths average over connected pairs only; set when some pair is
  /// unreachable.
  bool disconnected = false;
};

std::int64_t count_triangles(const Graph& g);

/// Mean shortest-path length over connected ordered pairs. Returns 0 when
/// no pair is connected; *disconnected reports unreachable pairs.
double characteristic_path_length(const Graph& g, bool* disconnected = nullptr, int threads = 1);

/// Pearson correlation of endpoint degrees over both orientations of every
/// edge. *valid is false when either degree variance is zero.
double assortativity(const Graph& g, bool* valid = nullptr);

/// alpha = 1 + n / sum ln(d_i / 0.5) over nodes with d_i >= 1.
double power_law_exponent(const Graph& g, bool* valid = nullptr);

/// 3 * triangles / sum_i C(d_i, 2).
double global_clustering(const Graph& g, bool* valid = nullptr);

/// Per-node local clustering coefficient (0 for degree < 2).
std::vector<double> local_clustering(const Graph& g);

/// NTC and EO are filled only when `reference` is non-null.
StatsReport graph_stats(const Graph& g, const Graph* reference = nullptr);

enum class HistogramKind { degree, clustering };

std::string to_string(HistogramKind kind);

struct MmdResult {
  double value = 0.0;  // unbiased MMD^2, clamped at 0
  double bandwidth = 1.0;
  HistogramKind kind = HistogramKind::degree;
  bool clamped = false;
};

/// Normalized degree histogram (bins 0..max degree) or 100-bin clustering
/// histogram on [0, 1].
std::vector<double> graph_histogram(const Graph& g, HistogramKind kind);

/// Total-variation distance between histograms, zero-padded to equal length.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Unbiased MMD^2 with the kernel exp(-TV^2 / (2 sigma^2)); sigma is the
/// median pairwise distance over the pooled histograms (1 if that is 0).
MmdResult mmd_histograms(const GraphDataset& a, const GraphDataset& b, HistogramKind kind);

struct ProfileRow {
  int t = 0;
  double mean_active = 0.0;
  double se_active = 0.0;
  double expected_active = 0.0;
  double mean_edges = 0.0;
  double se_edges = 0.0;
  double expected_edges = 0.0;
};

/// Per-step active-node and edge counts of the forward process, empirical
/// over n_trajectories against the closed-form expectations.
std::vector<ProfileRow> active_profile(const Graph& a0, const NoiseSchedule& s, int n_trajectories,
                                       SeededRng& rng);

}  // namespace edgediffuse
