// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "edgediffuse/graph.hpp"

using namespace edgediffuse;

namespace {

Graph parse(const std::string& text, LoadOptions opt = {}) {
  std::istringstream in(text);
  return parse_edge_list(in, opt);
}

}  // namespace

TEST_CASE("construction normalizes and deduplicates") {
  Graph g(4, {{2, 1}, {1, 2}, {0, 3}});
  CHECK(g.num_edges() == 2);
  CHECK(g.edges()[0] == Edge{0, 3});
  CHECK(g.edges()[1] == Edge{1, 2});
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK(g.degree(1) == 1);
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);
}

TEST_CASE("degree vector and ascending order") {
  Graph star(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  CHECK(degree(star) == DegreeVector{4, 1, 1, 1, 1});
  const auto order = degree_ascending_order(star);
  CHECK(order.back() == 0);
  CHECK(order.front() == 1);
}

TEST_CASE("parser accepts comments, header and blank lines") {
  Graph g = parse("# comment\nn=5\n\n0 1\n# mid\n1 2\n");
  CHECK(g.num_nodes() == 5);
  CHECK(g.num_edges() == 2);
}

TEST_CASE("parser rejects malformed input with a line number") {
  try {
    parse("0 1\n1 x\n");
    FAIL("expected an error");
  } catch (const GraphFormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("0 1 2\n"), GraphFormatError);
  CHECK_THROWS_AS(parse("3 3\n"), GraphFormatError);
  CHECK_THROWS_AS(parse("-1 2\n"), GraphFormatError);
  CHECK_THROWS_AS(parse(""), GraphFormatError);
  CHECK_THROWS_AS(parse("n=2\n0 5\n"), GraphFormatError);
}

TEST_CASE("sparse ids need compaction") {
  CHECK_THROWS_AS(parse("0 1\n1 5\n"), GraphFormatError);
  Graph g = parse("0 10\n10 20\n", LoadOptions{true});
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
}

TEST_CASE("write then read round trips, isolated nodes included") {
  Graph g(6, {{0, 1}, {3, 4}});
  std::stringstream ss;
  write_edge_list(ss, g);
  CHECK(parse_edge_list(ss) == g);
}

TEST_CASE("multi-graph dataset round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "edgediffuse_graph_test";
  std::filesystem::create_directories(dir);
  GraphDataset ds{"pair", {Graph(3, {{0, 1}}), Graph(4, {{0, 1}, {2, 3}, {1, 2}})}};
  save_dataset(dir / "pair.el", ds);
  GraphDataset back = load_dataset(dir / "pair.el");
  CHECK(back.name == "pair");
  REQUIRE(back.graphs.size() == 2);
  CHECK(back.graphs[0] == ds.graphs[0]);
  CHECK(back.graphs[1] == ds.graphs[1]);
}

TEST_CASE("edge overlap after canonical relabeling") {
  Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(edge_overlap(path, path) == doctest::Approx(1.0));
  // Relabeled copies overlap fully.
  std::vector<int> perm{3, 1, 0, 2};
  CHECK(edge_overlap(relabel(path, perm), path) == doctest::Approx(1.0));
  CHECK(edge_overlap(Graph::empty(4), path) == 0.0);
  CHECK_THROWS(edge_overlap(path, Graph::empty(4)));
  CHECK_THROWS(edge_overlap(Graph::empty(3), path));
}

TEST_CASE("committed fixtures load") {
  const std::filesystem::path data = EDGE_DIFFUSE_DATA_DIR;
  Graph toy = load_edge_list(data / "toy_community.el");
  CHECK(toy.num_nodes() == 24);
  Graph big = load_edge_list(data / "cora_like.el");
  CHECK(big.num_nodes() == 2485);
  CHECK(big.num_edges() == 5069);
}
