// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace edgediffuse {

DegreeHistogram DegreeHistogram::of(const DegreeVector& d) {
  DegreeHistogram h;
  int max_degree = 0;
  for (int x : d) {
    if (x < 0) throw std::invalid_argument("DegreeHistogram: negative degree");
    max_degree = std::max(max_degree, x);
  }
  h.u.assign(static_cast<std::size_t>(max_degree) + 1, 0);
  for (int x : d) ++h.u[static_cast<std::size_t>(x)];
  return h;
}

int DegreeHistogram::node_count() const { return std::accumulate(u.begin(), u.end(), 0); }

DegreeVector DegreeHistogram::expand() const {
  DegreeVector d;
  d.reserve(static_cast<std::size_t>(node_count()));
  for (std::size_t k = 1; k < u.size(); ++k) d.insert(d.end(), static_cast<std::size_t>(u[k]), static_cast<int>(k));
  if (!u.empty()) d.insert(d.end(), static_cast<std::size_t>(u[0]), 0);
  return d;
}

DegreePrior DegreePrior::single(DegreeVector degrees) {
  DegreePrior p;
  p.mode_ = Mode::single_graph;
  p.degrees_ = std::move(degrees);
  for (int x : p.degrees_) {
    if (x < 0) throw std::invalid_argument("DegreePrior: negative degree");
    p.d_max_ = std::max(p.d_max_, x);
  }
  p.n_max_ = static_cast<int>(p.degrees_.size());
  return p;
}

DegreePrior DegreePrior::autoregressive(std::vector<DegreeHistogram> histograms, double lambda) {
  if (histograms.empty()) throw std::invalid_argument("DegreePrior: no training histograms");
  if (!(lambda > 0.0)) throw std::invalid_argument("DegreePrior: smoothing must be positive");
  DegreePrior p;
  p.mode_ = Mode::autoregressive;
  p.lambda_ = lambda;
  for (const auto& h : histograms) {
    p.d_max_ = std::max(p.d_max_, h.d_max());
    p.n_max_ = std::max(p.n_max_, h.node_count());
  }
  p.histograms_ = std::move(histograms);
  p.laws_.resize(static_cast<std::size_t>(p.positions()));
  for (const auto& h : p.histograms_) {
    std::vector<int> prefix;
    for (int pos = 0; pos < p.positions(); ++pos) {
      const int v = p.histogram_value(h, pos);
      auto& law = p.laws_[static_cast<std::size_t>(pos)];
      ++law.marginal[v];
      ++law.by_context[p.context_of(prefix, pos)][v];
      prefix.push_back(v);
    }
  }
  return p;
}

int DegreePrior::histogram_value(const DegreeHistogram& h, int position) const {
  const std::size_t k = position == d_max_ ? 0 : static_cast<std::size_t>(position) + 1;
  return k < h.u.size() ? h.u[k] : 0;
}

DegreePrior::Context DegreePrior::context_of(const std::vector<int>& prefix, int position) const {
  const auto at = [&](int i) { return i >= 0 ? prefix[static_cast<std::size_t>(i)] : -1; };
  return {at(position - 2), at(position - 1)};
}

std::vector<std::pair<int, double>> DegreePrior::smoothed(const std::map<int, int>& counts) const {
  double total = 0.0;
  for (auto [v, c] : counts) total += c + lambda_;
  std::vector<std::pair<int, double>> out;
  out.reserve(counts.size());
  for (auto [v, c] : counts) out.emplace_back(v, (c + lambda_) / total);
  return out;
}

std::vector<std::pair<int, double>> DegreePrior::conditional(int position,
                                                             const std::vector<int>& prefix) const {
  if (mode_ != Mode::autoregressive) throw std::logic_error("conditional: single-graph prior");
  if (position < 0 || position >= positions() || prefix.size() < static_cast<std::size_t>(position)) {
    throw std::out_of_range("conditional: position");
  }
  const auto& law = laws_[static_cast<std::size_t>(position)];
  const auto it = law.by_context.find(context_of(prefix, position));
  return smoothed(it != law.by_context.end() ? it->second : law.marginal);
}

DegreeVector DegreePrior::sample(SeededRng& rng) const {
  if (mode_ == Mode::single_graph) return degrees_;
  DegreeVector d;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<int> prefix;
    for (int pos = 0; pos < positions(); ++pos) {
      const auto law = conditional(pos, prefix);
      std::vector<double> w;
      w.reserve(law.size());
      for (const auto& [v, p] : law) w.push_back(p);
      prefix.push_back(law[rng.categorical(w)].first);
    }
    DegreeHistogram h;
    h.u.assign(static_cast<std::size_t>(d_max_) + 1, 0);
    for (int pos = 0; pos < positions(); ++pos) {
      const std::size_t k = pos == d_max_ ? 0 : static_cast<std::size_t>(pos) + 1;
      h.u[k] = prefix[static_cast<std::size_t>(pos)];
    }
    d = h.expand();
    if (std::accumulate(d.begin(), d.end(), 0L) % 2 == 0) return d;
  }
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0) positive.push_back(i);
  }
  // An odd sum implies at least one positive entry.
  --d[positive[rng.uniform_index(positive.size())]];
  return d;
}

double DegreePrior::nll(const Graph& g, bool* unseen) const {
  bool miss = false;
  double total = 0.0;
  if (mode_ == Mode::single_graph) {
    DegreeVector a = degree(g);
    DegreeVector b = degrees_;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      miss = true;
      total = kUnseenNll;
    }
  } else {
    const DegreeHistogram h = DegreeHistogram::of(degree(g));
    for (int k = d_max_ + 1; k <= h.d_max(); ++k) {
      if (h.u[static_cast<std::size_t>(k)] != 0) {
        miss = true;
        total += kUnseenNll;
      }
    }
    std::vector<int> prefix;
    for (int pos = 0; pos < positions(); ++pos) {
      const int v = histogram_value(h, pos);
      const auto law = conditional(pos, prefix);
      const auto it = std::find_if(law.begin(), law.end(), [v](const auto& e) { return e.first == v; });
      if (it == law.end()) {
        miss = true;
        total += kUnseenNll;
      } else {
        total -= std::log(it->second);
      }
      prefix.push_back(v);
    }
  }
  if (unseen != nullptr) *unseen = miss;
  return total;
}

void DegreePrior::serialize(ByteWriter& w) const {
  w.u8(mode_ == Mode::single_graph ? 0 : 1);
  if (mode_ == Mode::single_graph) {
    w.u32(static_cast<std::uint32_t>(degrees_.size()));
    for (int x : degrees_) w.u32(static_cast<std::uint32_t>(x));
    return;
  }
  w.f64(lambda_);
  w.u32(static_cast<std::uint32_t>(histograms_.size()));
  for (const auto& h : histograms_) {
    w.u32(static_cast<std::uint32_t>(h.u.size()));
    for (int x : h.u) w.u32(static_cast<std::uint32_t>(x));
  }
}

DegreePrior DegreePrior::deserialize(ByteReader& r) {
  const std::uint8_t mode = r.u8();
  if (mode == 0) {
    DegreeVector d(r.u32());
    for (int& x : d) x = static_cast<int>(r.u32());
    return single(std::move(d));
  }
  if (mode != 1) throw std::runtime_error("degree prior: unknown mode tag");
  const double lambda = r.f64();
  std::vector<DegreeHistogram> hs(r.u32());
  for (auto& h : hs) {
    h.u.resize(r.u32());
    for (int& x : h.u) x = static_cast<int>(r.u32());
  }
  return autoregressive(std::move(hs), lambda);
}

DegreePrior fit_degree_prior(const GraphDataset& ds) {
  if (ds.graphs.empty()) throw std::invalid_argument("fit_degree_prior: empty dataset");
  if (ds.graphs.size() == 1) return DegreePrior::single(degree(ds.graphs.front()));
  std::vector<DegreeHistogram> hs;
  hs.reserve(ds.graphs.size());
  for (const Graph& g : ds.graphs) hs.push_back(DegreeHistogram::of(degree(g)));
  return DegreePrior::autoregressive(std::move(hs));
}

DegreeVector sample_degrees(const DegreePrior& prior, SeededRng& rng) { return prior.sample(rng); }

double degree_prior_nll(const DegreePrior& prior, const Graph& g, bool* unseen) {
  return prior.nll(g, unseen);
}

}  // namespace edgediffuse
