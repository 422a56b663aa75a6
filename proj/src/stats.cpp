// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "edgediffuse/forward.hpp"
#include "edgediffuse/parallel.hpp"
#include "edgediffuse/simd.hpp"

namespace edgediffuse {

std::int64_t count_triangles(const Graph& g) {
  std::int64_t count = 0;
  for (const Edge& e : g.edges()) {
    const auto a = g.neighbors(e.u);
    const auto b = g.neighbors(e.v);
    auto ia = std::upper_bound(a.begin(), a.end(), e.v);
    auto ib = std::upper_bound(b.begin(), b.end(), e.v);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++count;
        ++ia;
        ++ib;
      }
    }
  }
  return count;
}

double characteristic_path_length(const Graph& g, bool* disconnected, int threads) {
  const int n = g.num_nodes();
  std::vector<double> sums(static_cast<std::size_t>(n), 0.0);
  std::vector<std::int64_t> reached(static_cast<std::size_t>(n), 0);
  parallel_for(
      static_cast<std::size_t>(n),
      [&](std::size_t src) {
        std::vector<int> dist(static_cast<std::size_t>(n), -1);
        std::queue<int> q;
        dist[src] = 0;
        q.push(static_cast<int>(src));
        while (!q.empty()) {
          const int u = q.front();
          q.pop();
          for (int v : g.neighbors(u)) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
              dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
              sums[src] += dist[static_cast<std::size_t>(v)];
              ++reached[src];
              q.push(v);
            }
          }
        }
      },
      threads);
  double total = 0.0;
  std::int64_t pairs = 0;
  for (int i = 0; i < n; ++i) {
    total += sums[static_cast<std::size_t>(i)];
    pairs += reached[static_cast<std::size_t>(i)];
  }
  if (disconnected != nullptr) {
    *disconnected = pairs < static_cast<std::int64_t>(n) * (n - 1);
  }
  return pairs > 0 ? total / static_cast<double>(pairs) : 0.0;
}

double assortativity(const Graph& g, bool* valid) {
  double sx = 0.0, sxx = 0.0, sxy = 0.0;
  const double m2 = 2.0 * static_cast<double>(g.num_edges());
  for (const Edge& e : g.edges()) {
    const double a = g.degree(e.u);
    const double b = g.degree(e.v);
    // Both orientations: x and y share the same marginal.
    sx += a + b;
    sxx += a * a + b * b;
    sxy += 2.0 * a * b;
  }
  bool ok = m2 > 0.0;
  double r = 0.0;
  if (ok) {
    const double mean = sx / m2;
    const double var = sxx / m2 - mean * mean;
    const double cov = sxy / m2 - mean * mean;
    ok = var > 1e-12 * std::max(1.0, mean * mean);
    if (ok) r = std::clamp(cov / var, -1.0, 1.0);
  }
  if (valid != nullptr) *valid = ok;
  return r;
}

double power_law_exponent(const Graph& g, bool* valid) {
  double denom = 0.0;
  int count = 0;
  for (int i = 0; i < g.num_nodes(); ++i) {
    const int d = g.degree(i);
    if (d >= 1) {
      denom += std::log(d / 0.5);
      ++count;
    }
  }
  if (valid != nullptr) *valid = count > 0;
  return count > 0 ? 1.0 + count / denom : 0.0;
}

double global_clustering(const Graph& g, bool* valid) {
  double triplets = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i) {
    const double d = g.degree(i);
    triplets += d * (d - 1.0) / 2.0;
  }
  if (valid != nullptr) *valid = triplets > 0.0;
  return triplets > 0.0 ? 3.0 * static_cast<double>(count_triangles(g)) / triplets : 0.0;
}

std::vector<double> local_clustering(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> tri(static_cast<std::size_t>(n), 0.0);
  for (const Edge& e : g.edges()) {
    const auto a = g.neighbors(e.u);
    const auto b = g.neighbors(e.v);
    auto ia = std::upper_bound(a.begin(), a.end(), e.v);
    auto ib = std::upper_bound(b.begin(), b.end(), e.v);
    while (ia != a.end() && ib != b.end()) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        tri[static_cast<std::size_t>(e.u)] += 1.0;
        tri[static_cast<std::size_t>(e.v)] += 1.0;
        tri[static_cast<std::size_t>(*ia)] += 1.0;
        ++ia;
        ++ib;
      }
    }
  }
  std::vector<double> cc(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const double d = g.degree(i);
    if (d >= 2) cc[static_cast<std::size_t>(i)] = tri[static_cast<std::size_t>(i)] / (d * (d - 1.0) / 2.0);
  }
  return cc;
}

StatsReport graph_stats(const Graph& g, const Graph* reference) {
  StatsReport r;
  r.ple = power_law_exponent(g, &r.ple_valid);
  r.triangles = count_triangles(g);
  r.cc = global_clustering(g, &r.cc_valid);
  bool disconnected = false;
  r.cpl = characteristic_path_length(g, &disconnected);
  r.disconnected = disconnected;
  r.cpl_valid = g.num_edges() > 0;
  r.ac = assortativity(g, &r.ac_valid);
  if (reference != nullptr) {
    const std::int64_t ref_tri = count_triangles(*reference);
    r.ntc_valid = ref_tri > 0;
    if (r.ntc_valid) r.ntc = static_cast<double>(r.triangles) / static_cast<double>(ref_tri);
    r.eo_valid = reference->num_nodes() == g.num_nodes() && reference->num_edges() > 0;
    if (r.eo_valid) r.eo = edge_overlap(g, *reference);
  }
  return r;
}

std::string to_string(HistogramKind kind) {
  return kind == HistogramKind::degree ? "degree" : "clustering";
}

std::vector<double> graph_histogram(const Graph& g, HistogramKind kind) {
  const int n = g.num_nodes();
  std::vector<double> h;
  if (kind == HistogramKind::degree) {
    int max_degree = 0;
    for (int i = 0; i < n; ++i) max_degree = std::max(max_degree, g.degree(i));
    h.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
    for (int i = 0; i < n; ++i) h[static_cast<std::size_t>(g.degree(i))] += 1.0;
  } else {
    h.assign(100, 0.0);
    for (double c : local_clustering(g)) {
      h[static_cast<std::size_t>(std::min(99, static_cast<int>(c * 100.0)))] += 1.0;
    }
  }
  if (n > 0) {
    for (double& x : h) x /= n;
  }
  return h;
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t common = std::min(a.size(), b.size());
  double l1 = simd::l1_distance(std::span<const double>(a.data(), common),
                                std::span<const double>(b.data(), common));
  for (std::size_t i = common; i < a.size(); ++i) l1 += std::abs(a[i]);
  for (std::size_t i = common; i < b.size(); ++i) l1 += std::abs(b[i]);
  return 0.5 * l1;
}

MmdResult mmd_histograms(const GraphDataset& a, const GraphDataset& b, HistogramKind kind) {
  if (a.graphs.empty() || b.graphs.empty()) throw std::invalid_argument("mmd_histograms: empty set");
  std::vector<std::vector<double>> h;
  for (const Graph& g : a.graphs) h.push_back(graph_histogram(g, kind));
  for (const Graph& g : b.graphs) h.push_back(graph_histogram(g, kind));
  const std::size_t na = a.graphs.size();
  const std::size_t total = h.size();

  std::vector<double> dist(total * total, 0.0);
  std::vector<double> pooled;
  pooled.reserve(total * (total - 1) / 2);
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      const double d = tv_distance(h[i], h[j]);
      dist[i * total + j] = dist[j * total + i] = d;
      pooled.push_back(d);
    }
  }
  double sigma = 1.0;
  if (!pooled.empty()) {
    std::sort(pooled.begin(), pooled.end());
    const std::size_t m = pooled.size();
    const double median = m % 2 == 1 ? pooled[m / 2] : 0.5 * (pooled[m / 2 - 1] + pooled[m / 2]);
    if (median > 0.0) sigma = median;
  }
  auto k = [&](std::size_t i, std::size_t j) {
    const double d = dist[i * total + j];
    return std::exp(-d * d / (2.0 * sigma * sigma));
  };
  // Off-diagonal mean within a set; a singleton set has only k(x, x) = 1.
  auto within = [&](std::size_t lo, std::size_t hi) {
    const std::size_t n = hi - lo;
    if (n == 1) return 1.0;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = lo; j < hi; ++j) {
        if (i != j) s += k(i, j);
      }
    }
    return s / static_cast<double>(n * (n - 1));
  };
  double cross = 0.0;
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = na; j < total; ++j) cross += k(i, j);
  }
  cross /= static_cast<double>(na * (total - na));

  MmdResult r;
  r.kind = kind;
  r.bandwidth = sigma;
  const double v = within(0, na) + within(na, total) - 2.0 * cross;
  r.clamped = v < 0.0;
  r.value = std::max(0.0, v);
  return r;
}

std::vector<ProfileRow> active_profile(const Graph& a0, const NoiseSchedule& s, int n_trajectories,
                                       SeededRng& rng) {
  if (n_trajectories <= 0) throw std::invalid_argument("active_profile: need at least one trajectory");
  const int T = s.steps();
  std::vector<double> sa(static_cast<std::size_t>(T) + 1, 0.0), saa(sa), se(sa), see(sa);
  for (int r = 0; r < n_trajectories; ++r) {
    Graph cur = a0;
    for (int t = 1; t <= T; ++t) {
      Graph next = sample_step(cur, s, t, rng);
      const ActiveMask mask = active_mask(cur, next);
      double k = 0.0;
      for (auto m : mask) k += m;
      const double e = static_cast<double>(next.num_edges());
      const auto ti = static_cast<std::size_t>(t);
      sa[ti] += k;
      saa[ti] += k * k;
      se[ti] += e;
      see[ti] += e * e;
      cur = std::move(next);
    }
  }
  const double n = n_trajectories;
  auto stderr_of = [n](double sum, double sum2) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sum2 - n * mean * mean) / (n - 1)) / n);
  };
  const DegreeVector d0 = degree(a0);
  std::vector<ProfileRow> rows;
  rows.reserve(static_cast<std::size_t>(T));
  for (int t = 1; t <= T; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    ProfileRow row;
    row.t = t;
    row.mean_active = sa[ti] / n;
    row.se_active = stderr_of(sa[ti], saa[ti]);
    row.expected_active = expected_active_count(d0, s, t);
    row.mean_edges = se[ti] / n;
    row.se_edges = stderr_of(se[ti], see[ti]);
    row.expected_edges = static_cast<double>(a0.num_edges()) * s.alpha_bar(t);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace edgediffuse
