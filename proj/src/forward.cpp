// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/forward.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace edgediffuse {

double BinomialLaw::pmf(int k) const {
  if (k < 0 || k > trials) return 0.0;
  if (prob <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (prob >= 1.0) return k == trials ? 1.0 : 0.0;
  const double q = 1.0 - prob;
  if (trials <= 60) {
    // Exact binomial coefficient in double for small n.
    double coeff = 1.0;
    const int kk = std::min(k, trials - k);
    for (int i = 1; i <= kk; ++i) coeff = coeff * (trials - kk + i) / i;
    return coeff * std::pow(prob, k) * std::pow(q, trials - k);
  }
  const double log_coeff =
      std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0);
  return std::exp(log_coeff + k * std::log(prob) + (trials - k) * std::log(q));
}

Graph sample_step(const Graph& prev, const NoiseSchedule& s, int t, SeededRng& rng) {
  const double beta = s.beta(t);
  const double keep = 1.0 - beta + beta * s.p();
  std::vector<Edge> kept;
  kept.reserve(prev.num_edges());
  for (const Edge& e : prev.edges()) {
    if (rng.bernoulli(keep)) kept.push_back(e);
  }
  const double add = beta * s.p();
  if (add > 0.0) {
    // Only reached for p > 0, which costs O(N^2); the removal process never
    // enumerates non-edges.
    for (int i = 0; i < prev.num_nodes(); ++i) {
      for (int j = i + 1; j < prev.num_nodes(); ++j) {
        if (!prev.has_edge(i, j) && rng.bernoulli(add)) kept.push_back({i, j});
      }
    }
  }
  return Graph(prev.num_nodes(), std::move(kept));
}

Graph sample_from_origin(const Graph& a0, const NoiseSchedule& s, int t, SeededRng& rng) {
  if (t == 0) return a0;
  const double abar = s.alpha_bar(t);
  const double keep = abar + (1.0 - abar) * s.p();
  std::vector<Edge> kept;
  kept.reserve(a0.num_edges());
  for (const Edge& e : a0.edges()) {
    if (rng.bernoulli(keep)) kept.push_back(e);
  }
  const double add = (1.0 - abar) * s.p();
  if (add > 0.0) {
    for (int i = 0; i < a0.num_nodes(); ++i) {
      for (int j = i + 1; j < a0.num_nodes(); ++j) {
        if (!a0.has_edge(i, j) && rng.bernoulli(add)) kept.push_back({i, j});
      }
    }
  }
  return Graph(a0.num_nodes(), std::move(kept));
}

ActiveMask active_mask(const Graph& prev, const Graph& next) {
  if (prev.num_nodes() != next.num_nodes()) {
    throw std::invalid_argument("active_mask: node counts differ");
  }
  ActiveMask mask(static_cast<std::size_t>(prev.num_nodes()));
  for (int i = 0; i < prev.num_nodes(); ++i) {
    mask[static_cast<std::size_t>(i)] = prev.degree(i) != next.degree(i) ? 1 : 0;
  }
  return mask;
}

Trajectory sample_trajectory(const Graph& a0, const NoiseSchedule& s, SeededRng& rng) {
  Trajectory traj;
  traj.graphs.reserve(static_cast<std::size_t>(s.steps()) + 1);
  traj.masks.reserve(static_cast<std::size_t>(s.steps()));
  traj.graphs.push_back(a0);
  for (int t = 1; t <= s.steps(); ++t) {
    Graph next = sample_step(traj.graphs.back(), s, t, rng);
    traj.masks.push_back(active_mask(traj.graphs.back(), next));
    traj.graphs.push_back(std::move(next));
  }
  return traj;
}

namespace {

void check_bit(int b, const char* name) {
  if (b != 0 && b != 1) throw std::invalid_argument(std::string(name) + " must be 0 or 1");
}

}  // namespace

double posterior_entry_general(int a0, int at, const NoiseSchedule& s, int t) {
  check_bit(a0, "a0");
  check_bit(at, "at");
  const double beta = s.beta(t);
  const double p = s.p();
  const double abar_prev = s.alpha_bar(t - 1);
  const double p1 = ((1.0 - beta + beta * p) * at + (beta - beta * p) * (1 - at)) *
                    (abar_prev * a0 + (1.0 - abar_prev) * p);
  const double p0 = ((beta * p) * at + (1.0 - beta * p) * (1 - at)) *
                    (1.0 + abar_prev * p - abar_prev * a0 - p);
  if (!(p0 + p1 > 0.0)) {
    throw std::domain_error("posterior_entry_general: conditioning event has probability zero");
  }
  return p1 / (p0 + p1);
}

double posterior_entry_p0(int a0, int at, const NoiseSchedule& s, int t) {
  check_bit(a0, "a0");
  check_bit(at, "at");
  if (s.p() != 0.0) throw std::invalid_argument("posterior_entry_p0 requires p == 0");
  if (t < 1 || t > s.steps()) throw std::out_of_range("posterior_entry_p0: step out of range");
  if (a0 == 0 && at == 1) {
    throw std::domain_error("posterior_entry_p0: edge present at t but absent at 0");
  }
  if (a0 == 0) return 0.0;
  if (at == 1) return 1.0;
  return gamma(s, t);
}

BinomialLaw posterior_degree_law(int d0, int dt, const NoiseSchedule& s, int t) {
  if (dt > d0 || dt < 0) {
    throw std::domain_error("posterior_degree_law: d^t exceeds d^0");
  }
  if (d0 == dt) {
    // Point mass; gamma may be undefined (alpha_bar_t == 1) and is not needed.
    if (t < 1 || t > s.steps()) throw std::out_of_range("posterior_degree_law: step");
    return {0, 0.0};
  }
  return {d0 - dt, gamma(s, t)};
}

BinomialLaw forward_degree_law(int degree_source, double keep_prob) {
  if (degree_source < 0) throw std::invalid_argument("forward_degree_law: negative degree");
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) {
    throw std::invalid_argument("forward_degree_law: keep_prob outside [0,1]");
  }
  return {degree_source, keep_prob};
}

double forward_active_prob(int degree_prev, const NoiseSchedule& s, int t) {
  return 1.0 - std::pow(1.0 - s.beta(t), degree_prev);
}

double reverse_active_prob(int d0, int dt, const NoiseSchedule& s, int t) {
  if (dt > d0 || dt < 0) throw std::domain_error("reverse_active_prob: d^t exceeds d^0");
  if (d0 == dt) {
    if (t < 1 || t > s.steps()) throw std::out_of_range("reverse_active_prob: step");
    return 0.0;
  }
  return 1.0 - std::pow(1.0 - gamma(s, t), d0 - dt);
}

double expected_active_count(const DegreeVector& d0, const NoiseSchedule& s, int t) {
  std::map<int, int> histogram;
  for (int d : d0) ++histogram[d];
  const double keep = s.alpha_bar(t - 1);
  double total = 0.0;
  for (auto [d, count] : histogram) {
    const BinomialLaw law = forward_degree_law(d, keep);
    double p_active = 0.0;
    for (int k = 1; k <= d; ++k) p_active += law.pmf(k) * forward_active_prob(k, s, t);
    total += count * p_active;
  }
  return total;
}

}  // namespace edgediffuse
