// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "edgediffuse/graph.hpp"
#include "edgediffuse/rng.hpp"
#include "edgediffuse/schedule.hpp"

namespace edgediffuse {

/// Per-node degree-change indicator s^t (1 = active).
using ActiveMask = std::vector<std::uint8_t>;

struct BinomialLaw {
  int trials = 0;
  double prob = 0.0;

  double pmf(int k) const;
  double mean() const { return trials * prob; }
  int sample(SeededRng& rng) const { return rng.binomial(trials, prob); }
};

/// A^0..A^T together with the masks s^1..s^T (masks[t-1] holds s^t).
struct Trajectory {
  std::vector<Graph> graphs;
  std::vector<ActiveMask> masks;
};

/// One forward transition q(A^t | A^{t-1}).
Graph sample_step(const Graph& prev, const NoiseSchedule& s, int t, SeededRng& rng);

/// Direct draw from q(A^t | A^0); t == 0 returns A^0.
Graph sample_from_origin(const Graph& a0, const NoiseSchedule& s, int t, SeededRng& rng);

ActiveMask active_mask(const Graph& prev, const Graph& next);

Trajectory sample_trajectory(const Graph& a0, const NoiseSchedule& s, SeededRng& rng);

/// Entry posterior q(A^{t-1}_ij = 1 | A^t_ij, A^0_ij) for any p.
double posterior_entry_general(int a0, int at, const NoiseSchedule& s, int t);

/// Three-case entry posterior of the edge-removal process (p == 0).
double posterior_entry_p0(int a0, int at, const NoiseSchedule& s, int t);

/// Law of d^{t-1}_i - d^t_i given d^t_i and d^0_i.
BinomialLaw posterior_degree_law(int d0, int dt, const NoiseSchedule& s, int t);

/// Law of the surviving degree after independent edge retention.
BinomialLaw forward_degree_law(int degree_source, double keep_prob);

/// P(s^t_i = 1 | d^{t-1}_i) = 1 - (1 - beta_t)^{d^{t-1}_i}.
double forward_active_prob(int degree_prev, const NoiseSchedule& s, int t);

/// P(s^t_i = 1 | d^t_i, d^0_i) = 1 - (1 - gamma_t)^{d^0_i - d^t_i}.
double reverse_active_prob(int d0, int dt, const NoiseSchedule& s, int t);

/// E[sum_i s^t_i] for a graph with degrees d0, marginalizing d^{t-1}.
double expected_active_count(const DegreeVector& d0, const NoiseSchedule& s, int t);

}  // namespace edgediffuse
