// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace edgediffuse {

/// Unordered node pair stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using DegreeVector = std::vector<int>;

/// Simple undirected graph on dense node ids 0..n-1.
///
/// Edges are kept as a sorted pair list plus sorted per-node adjacency
/// lists. Instances are immutable after construction.
class Graph {
 public:
  Graph() = default;
  /// Builds a graph on `n` nodes. Pairs may come in either orientation and
  /// may repeat; self-loops and out-of-range endpoints throw.
  Graph(int n, std::vector<Edge> edges);
  static Graph empty(int n) { return Graph(n, {}); }

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int i) const { return adj_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return static_cast<int>(adj_[static_cast<std::size_t>(i)].size()); }
  bool has_edge(int i, int j) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

DegreeVector degree(const Graph& g);

/// Node order sorted by ascending degree; ties keep ascending node id.
std::vector<int> degree_ascending_order(const Graph& g);

/// Relabels nodes: node i of `g` becomes node new_label[i].
Graph relabel(const Graph& g, std::span<const int> new_label);

/// Fraction of training edges reproduced once both graphs are relabeled by
/// their degree-ascending order.
double edge_overlap(const Graph& generated, const Graph& training);

struct GraphDataset {
  std::string name;
  std::vector<Graph> graphs;
};

class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadOptions {
  /// Relabel sparse node ids to 0..n-1 in ascending id order instead of
  /// rejecting ids that never occur.
  bool compact_ids = false;
};

Graph parse_edge_list(std::istream& in, const LoadOptions& options = {});
Graph load_edge_list(const std::filesystem::path& path, const LoadOptions& options = {});
void write_edge_list(std::ostream& out, const Graph& g);
void save_edge_list(const std::filesystem::path& path, const Graph& g);

/// Reads a multi-graph container: edge-list blocks separated by "---" lines.
GraphDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});
void save_dataset(const std::filesystem::path& path, const GraphDataset& ds);

}  // namespace edgediffuse
