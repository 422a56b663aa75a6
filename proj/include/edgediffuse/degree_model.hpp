// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <vector>

#include "edgediffuse/binary_io.hpp"
#include "edgediffuse/graph.hpp"
#include "edgediffuse/rng.hpp"

namespace edgediffuse {

/// u[k] = number of nodes with degree k, for k = 0..d_max. u[0] counts
/// isolated nodes.
struct DegreeHistogram {
  std::vector<int> u;

  static DegreeHistogram of(const DegreeVector& d);
  int d_max() const { return static_cast<int>(u.size()) - 1; }
  int node_count() const;
  /// Materializes k repeated u[k] times for k = 1..d_max, then u[0] zeros.
  DegreeVector expand() const;

  friend bool operator==(const DegreeHistogram&, const DegreeHistogram&) = default;
};

/// Prior over target degree sequences.
///
/// Single-graph mode stores one degree vector and returns it verbatim.
/// Autoregressive mode factorizes p(u) = p(u_1) prod_k p(u_k | u_{k-2}, u_{k-1})
/// over positions k = 1..d_max followed by u_0. Each conditional is the
/// add-lambda smoothed empirical law over the values seen in that context,
/// backing off to the position marginal for unseen contexts.
class DegreePrior {
 public:
  enum class Mode { single_graph, autoregressive };

  static constexpr double kUnseenNll = 1e6;

  static DegreePrior single(DegreeVector degrees);
  static DegreePrior autoregressive(std::vector<DegreeHistogram> histograms, double lambda = 0.1);

  Mode mode() const { return mode_; }
  const DegreeVector& training_degrees() const { return degrees_; }
  const std::vector<DegreeHistogram>& training_histograms() const { return histograms_; }
  double lambda() const { return lambda_; }
  int d_max() const { return d_max_; }
  int n_max() const { return n_max_; }
  /// Number of autoregressive positions (d_max + 1).
  int positions() const { return d_max_ + 1; }

  /// Conditional law at `position` given the values drawn before it, as
  /// (value, probability) pairs. Position d_max holds u_0.
  std::vector<std::pair<int, double>> conditional(int position, const std::vector<int>& prefix) const;

  DegreeVector sample(SeededRng& rng) const;

  /// -log p(u(g)). Events outside the support cost kUnseenNll each and set
  /// *unseen when given.
  double nll(const Graph& g, bool* unseen = nullptr) const;

  void serialize(ByteWriter& w) const;
  static DegreePrior deserialize(ByteReader& r);

 private:
  using Context = std::array<int, 2>;
  struct PositionLaw {
    std::map<int, int> marginal;
    std::map<Context, std::map<int, int>> by_context;
  };

  int histogram_value(const DegreeHistogram& h, int position) const;
  Context context_of(const std::vector<int>& prefix, int position) const;
  std::vector<std::pair<int, double>> smoothed(const std::map<int, int>& counts) const;

  Mode mode_ = Mode::single_graph;
  DegreeVector degrees_;
  std::vector<DegreeHistogram> histograms_;
  double lambda_ = 0.1;
  int d_max_ = 0;
  int n_max_ = 0;
  std::vector<PositionLaw> laws_;
};

/// One graph yields single-graph mode, several yield autoregressive mode.
DegreePrior fit_degree_prior(const GraphDataset& ds);

DegreeVector sample_degrees(const DegreePrior& prior, SeededRng& rng);

double degree_prior_nll(const DegreePrior& prior, const Graph& g, bool* unseen = nullptr);

}  // namespace edgediffuse
