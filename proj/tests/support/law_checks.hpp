// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "edgediffuse/forward.hpp"
#include "oracles.hpp"

namespace oracle {

struct LawCheck {
  double max_error = 0.0;
  long comparisons = 0;
  long missing_throws = 0;
};

/// Compares the entry and degree posteriors against Bayes' rule applied to
/// every trajectory of every 4-node graph under the linear schedule with T
/// steps. Events of probability zero are skipped, except that an edge
/// absent at 0 and present at t must be rejected.
inline LawCheck check_exact_laws(int T) {
  using namespace edgediffuse;
  const int n = 4;
  const auto pairs = all_pairs(n);
  const auto s = NoiseSchedule::linear(T);
  LawCheck out;
  auto track = [&](double a, double b) {
    out.max_error = std::max(out.max_error, std::abs(a - b));
    ++out.comparisons;
  };

  for (std::uint32_t gmask = 0; gmask < (1u << pairs.size()); ++gmask) {
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (gmask >> k & 1) edges.push_back(pairs[k]);
    }
    const Graph a0(n, edges);
    // entry[t][k][a_t][a_{t-1}], deg[t][i][d_t][d_{t-1} - d_t]
    std::vector<std::vector<std::array<std::array<double, 2>, 2>>> entry(
        static_cast<std::size_t>(T) + 1, std::vector<std::array<std::array<double, 2>, 2>>(pairs.size()));
    std::vector<std::vector<std::vector<std::vector<double>>>> deg(
        static_cast<std::size_t>(T) + 1,
        std::vector<std::vector<std::vector<double>>>(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))));
    for (auto& row : entry) {
      for (auto& e : row) e = {{{0, 0}, {0, 0}}};
    }
    enumerate_trajectories(a0, s, [&](const Path& p) {
      for (int t = 1; t <= T; ++t) {
        const auto& prev = p.state[static_cast<std::size_t>(t) - 1];
        const auto& cur = p.state[static_cast<std::size_t>(t)];
        for (std::size_t k = 0; k < pairs.size(); ++k) entry[static_cast<std::size_t>(t)][k][cur[k]][prev[k]] += p.weight;
        for (int i = 0; i < n; ++i) {
          const int dt = node_degree(pairs, cur, i);
          const int dp = node_degree(pairs, prev, i);
          deg[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)][static_cast<std::size_t>(dt)]
             [static_cast<std::size_t>(dp - dt)] += p.weight;
        }
      }
    });

    for (int t = 1; t <= T; ++t) {
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const int a0k = a0.has_edge(pairs[k].u, pairs[k].v) ? 1 : 0;
        for (int at = 0; at <= 1; ++at) {
          const auto& w = entry[static_cast<std::size_t>(t)][k][static_cast<std::size_t>(at)];
          const double den = w[0] + w[1];
          if (den == 0.0) {
            if (a0k == 0 && at == 1) {
              try {
                posterior_entry_p0(a0k, at, s, t);
                ++out.missing_throws;
              } catch (const std::domain_error&) {
              }
              try {
                posterior_entry_general(a0k, at, s, t);
                ++out.missing_throws;
              } catch (const std::domain_error&) {
              }
            }
            continue;
          }
          const double truth = w[1] / den;
          track(posterior_entry_p0(a0k, at, s, t), truth);
          track(posterior_entry_general(a0k, at, s, t), truth);
        }
      }
      for (int i = 0; i < n; ++i) {
        const int d0 = a0.degree(i);
        for (int dt = 0; dt <= d0; ++dt) {
          const auto& w = deg[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)][static_cast<std::size_t>(dt)];
          double den = 0.0;
          for (double x : w) den += x;
          if (den == 0.0) continue;
          const BinomialLaw law = posterior_degree_law(d0, dt, s, t);
          for (int delta = 0; delta < n; ++delta) track(law.pmf(delta), w[static_cast<std::size_t>(delta)] / den);
          track(reverse_active_prob(d0, dt, s, t), 1.0 - w[0] / den);
        }
      }
    }
  }
  return out;
}

}  // namespace oracle
