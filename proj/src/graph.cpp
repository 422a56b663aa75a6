// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace edgediffuse {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw std::invalid_argument("Graph: negative node count");
  for (Edge& e : edges) {
    if (e.u == e.v) {
      throw std::invalid_argument("Graph: self-loop at node " + std::to_string(e.u));
    }
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw std::invalid_argument("Graph: endpoint out of range in edge (" +
                                  std::to_string(e.u) + "," + std::to_string(e.v) + ")");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  adj_.assign(static_cast<std::size_t>(n), {});
  for (const Edge& e : edges_) {
    adj_[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj_[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i == j) return false;
  const auto& a = adj_[static_cast<std::size_t>(i)];
  const auto& b = adj_[static_cast<std::size_t>(j)];
  // Search the shorter list.
  return a.size() <= b.size() ? std::binary_search(a.begin(), a.end(), j)
                              : std::binary_search(b.begin(), b.end(), i);
}

DegreeVector degree(const Graph& g) {
  DegreeVector d(static_cast<std::size_t>(g.num_nodes()));
  for (int i = 0; i < g.num_nodes(); ++i) d[static_cast<std::size_t>(i)] = g.degree(i);
  return d;
}

std::vector<int> degree_ascending_order(const Graph& g) {
  std::vector<int> order(static_cast<std::size_t>(g.num_nodes()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return g.degree(a) < g.degree(b); });
  return order;
}

Graph relabel(const Graph& g, std::span<const int> new_label) {
  if (new_label.size() != static_cast<std::size_t>(g.num_nodes())) {
    throw std::invalid_argument("relabel: permutation length does not match node count");
  }
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (const Edge& e : g.edges()) {
    edges.push_back({new_label[static_cast<std::size_t>(e.u)],
                     new_label[static_cast<std::size_t>(e.v)]});
  }
  return Graph(g.num_nodes(), std::move(edges));
}

namespace {

Graph canonical_by_degree(const Graph& g) {
  const std::vector<int> order = degree_ascending_order(g);
  std::vector<int> label(order.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    label[static_cast<std::size_t>(order[rank])] = static_cast<int>(rank);
  }
  return relabel(g, label);
}

}  // namespace

double edge_overlap(const Graph& generated, const Graph& training) {
  if (generated.num_nodes() != training.num_nodes()) {
    throw std::invalid_argument("edge_overlap: graphs have different node counts");
  }
  if (training.num_edges() == 0) {
    throw std::invalid_argument("edge_overlap: training graph has no edges");
  }
  const Graph a = canonical_by_degree(generated);
  const Graph b = canonical_by_degree(training);
  std::size_t common = 0;
  auto ia = a.edges().begin();
  auto ib = b.edges().begin();
  while (ia != a.edges().end() && ib != b.edges().end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return static_cast<double>(common) / static_cast<double>(b.num_edges());
}

// ---------------------------------------------------------------------------
// Edge-list text format.

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view tok, long long& out) {
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct Block {
  std::vector<std::string> lines;
  std::size_t first_line = 1;
};

Graph parse_block(const Block& block, const LoadOptions& options) {
  long long declared_n = -1;
  bool seen_content = false;
  std::vector<std::pair<long long, long long>> pairs;

  for (std::size_t k = 0; k < block.lines.size(); ++k) {
    const std::size_t lineno = block.first_line + k;
    const std::string_view line = trim(block.lines[k]);
    if (line.empty() || line.front() == '#') continue;

    if (line.rfind("n=", 0) == 0) {
      if (seen_content) {
        throw GraphFormatError("line " + std::to_string(lineno) +
                                   ": node-count header must precede edges",
                               lineno);
      }
      long long n = 0;
      if (!parse_int(trim(line.substr(2)), n) || n < 0) {
        throw GraphFormatError("line " + std::to_string(lineno) + ": malformed header", lineno);
      }
      declared_n = n;
      seen_content = true;
      continue;
    }
    seen_content = true;

    std::istringstream tokens{std::string(line)};
    std::string a, b, extra;
    long long u = 0, v = 0;
    if (!(tokens >> a >> b) || (tokens >> extra) || !parse_int(a, u) || !parse_int(b, v) ||
        u < 0 || v < 0) {
      throw GraphFormatError("line " + std::to_string(lineno) +
                                 ": expected two nonnegative integer node ids",
                             lineno);
    }
    if (u == v) {
      throw GraphFormatError("line " + std::to_string(lineno) + ": self-loop on node " +
                                 std::to_string(u),
                             lineno);
    }
    pairs.emplace_back(u, v);
  }

  if (!seen_content) {
    throw GraphFormatError("empty edge list (no header and no edges)", block.first_line);
  }

  long long n = declared_n;
  std::vector<Edge> edges;
  edges.reserve(pairs.size());

  if (options.compact_ids) {
    std::map<long long, int> remap;
    for (auto [u, v] : pairs) {
      remap.emplace(u, 0);
      remap.emplace(v, 0);
    }
    int next = 0;
    for (auto& [id, label] : remap) label = next++;
    for (auto [u, v] : pairs) edges.push_back({remap[u], remap[v]});
    n = std::max<long long>(declared_n, next);
    return Graph(static_cast<int>(n), std::move(edges));
  }

  long long max_id = -1;
  for (auto [u, v] : pairs) max_id = std::max({max_id, u, v});
  if (declared_n >= 0) {
    if (max_id >= declared_n) {
      throw GraphFormatError("node id " + std::to_string(max_id) +
                                 " exceeds declared node count " + std::to_string(declared_n),
                             block.first_line);
    }
  } else {
    n = max_id + 1;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : pairs) {
      seen[static_cast<std::size_t>(u)] = 1;
      seen[static_cast<std::size_t>(v)] = 1;
    }
    const auto gap = std::find(seen.begin(), seen.end(), 0);
    if (gap != seen.end()) {
      throw GraphFormatError("node id " + std::to_string(gap - seen.begin()) +
                                 " never occurs; declare n=<count> or enable id compaction",
                             block.first_line);
    }
  }
  for (auto [u, v] : pairs) edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  return Graph(static_cast<int>(n), std::move(edges));
}

std::vector<Block> split_blocks(std::istream& in) {
  std::vector<Block> blocks(1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line) == "---") {
      blocks.push_back(Block{{}, lineno + 1});
      continue;
    }
    blocks.back().lines.push_back(line);
  }
  return blocks;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

Graph parse_edge_list(std::istream& in, const LoadOptions& options) {
  Block block;
  std::string line;
  while (std::getline(in, line)) block.lines.push_back(line);
  return parse_block(block, options);
}

Graph load_edge_list(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = open_input(path);
  return parse_edge_list(in, options);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n=" << g.num_nodes() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void save_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, g);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GraphDataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  auto in = open_input(path);
  GraphDataset ds;
  ds.name = path.stem().string();
  for (const Block& block : split_blocks(in)) ds.graphs.push_back(parse_block(block, options));
  return ds;
}

void save_dataset(const std::filesystem::path& path, const GraphDataset& ds) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t k = 0; k < ds.graphs.size(); ++k) {
    if (k > 0) out << "---\n";
    write_edge_list(out, ds.graphs[k]);
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace edgediffuse
