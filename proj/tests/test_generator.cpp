// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <numeric>

#include "doctest.h"
#include "edgediffuse/generator.hpp"
#include "oracles.hpp"

using namespace edgediffuse;

namespace {

ModelParams fresh(int steps, std::uint64_t seed, int layers = 2) {
  Architecture arch;
  arch.hidden = 8;
  arch.layers = layers;
  arch.steps = steps;
  SeededRng rng(seed);
  return ModelParams::initialize(arch, rng);
}

void check_trace_arithmetic(const GenerationTrace& tr, int layers, int steps) {
  REQUIRE(tr.steps.size() == static_cast<std::size_t>(steps));
  std::size_t prev_edges = 0;
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    const StepRecord& r = tr.steps[k];
    CHECK(r.t == steps - static_cast<int>(k));
    CHECK(r.input_edges == prev_edges);
    const auto kk = static_cast<std::size_t>(r.active);
    CHECK(r.predicted_pairs == kk * (kk > 0 ? kk - 1 : 0) / 2);
    CHECK(r.message_ops == static_cast<std::size_t>(layers) * r.input_edges);
    CHECK(r.cumulative_edges == r.input_edges + r.edges_added);
    prev_edges = r.cumulative_edges;
  }
  CHECK(tr.final_graph.num_edges() == prev_edges);
}

}  // namespace

TEST_CASE("all-zero target degrees give an empty graph with no active nodes") {
  const auto s = NoiseSchedule::linear(10);
  SeededRng rng(1);
  const GenerationTrace tr = generate_from_degrees(fresh(10, 1), DegreeVector(7, 0), s, rng);
  CHECK(tr.final_graph.num_nodes() == 7);
  CHECK(tr.final_graph.num_edges() == 0);
  for (const StepRecord& r : tr.steps) CHECK(r.active == 0);
}

TEST_CASE("degree ceiling and trace counters hold for an untrained model") {
  const auto s = NoiseSchedule::linear(16);
  const ModelParams p = fresh(16, 4, 3);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Graph g = oracle::random_graph(20, 0.2, seed);
    SeededRng rng(seed);
    const GenerationTrace tr = generate_from_degrees(p, degree(g), s, rng);
    for (int i = 0; i < 20; ++i) CHECK(tr.final_graph.degree(i) <= g.degree(i));
    check_trace_arithmetic(tr, 3, 16);
  }
}

TEST_CASE("prior-driven generation keeps the sampled targets") {
  const Graph g = oracle::random_graph(15, 0.3, 9);
  const DegreePrior prior = DegreePrior::single(degree(g));
  SeededRng rng(3);
  const GenerationTrace tr = generate_degree_guided(fresh(8, 2), prior, NoiseSchedule::linear(8), rng);
  CHECK(tr.target_degrees == degree(g));
  for (int i = 0; i < 15; ++i) CHECK(tr.final_graph.degree(i) <= g.degree(i));
  CHECK_THROWS(generate_degree_guided(fresh(9, 2), prior, NoiseSchedule::linear(8), rng));
}

TEST_CASE("learned selection with saturated heads") {
  const auto s = NoiseSchedule::linear(5);
  ModelParams p = fresh(5, 6);
  SUBCASE("selection off gives an empty graph") {
    p.select_b(0, 0) = -1000.0;
    SeededRng rng(1);
    const GenerationTrace tr = generate_learned_selection(p, 9, s, rng);
    CHECK(tr.final_graph.num_edges() == 0);
    CHECK(tr.target_degrees.empty());
  }
  SUBCASE("selection and edges on give a complete graph after one step") {
    p.select_b(0, 0) = 1000.0;
    p.edge_b2(0, 0) = 1000.0;
    SeededRng rng(1);
    const GenerationTrace tr = generate_learned_selection(p, 9, s, rng);
    CHECK(tr.steps.front().cumulative_edges == 36);
    CHECK(tr.final_graph.num_edges() == 36);
  }
}

TEST_CASE("learned selection keeps its counters consistent") {
  const auto s = NoiseSchedule::linear(6);
  ModelParams p = fresh(6, 8);
  // Selection probability 1/2 keeps a mix of active and inactive nodes.
  p.select_w.fill(0.0);
  p.select_b(0, 0) = 0.0;
  SeededRng rng(2);
  const GenerationTrace tr = generate_learned_selection(p, 12, s, rng);
  std::size_t prev = 0;
  for (const StepRecord& r : tr.steps) {
    CHECK(r.input_edges == prev);
    const auto kk = static_cast<std::size_t>(r.active);
    CHECK(r.predicted_pairs == kk * (kk > 0 ? kk - 1 : 0) / 2);
    CHECK(r.message_ops == static_cast<std::size_t>(p.arch.layers) * r.input_edges);
    prev = r.cumulative_edges;
  }
  CHECK(tr.final_graph.num_edges() == prev);
}

TEST_CASE("active-set cap bounds K_t") {
  const auto s = NoiseSchedule::linear(4);
  const Graph g = oracle::random_graph(40, 0.3, 1);
  GenerationOptions opt;
  opt.max_active = 5;
  SeededRng rng(4);
  const GenerationTrace tr = generate_from_degrees(fresh(4, 1), degree(g), s, rng, opt);
  for (const StepRecord& r : tr.steps) CHECK(r.active <= 5);
}

TEST_CASE("batches are reproducible and sized as asked") {
  const Graph g = oracle::random_graph(18, 0.25, 3);
  const DegreePrior prior = DegreePrior::single(degree(g));
  const auto s = NoiseSchedule::linear(8);
  const ModelParams p = fresh(8, 5);
  CHECK(generate_batch(p, prior, s, 0, SeededRng(1)).graphs.graphs.empty());
  const GenerationBatch a = generate_batch(p, prior, s, 12, SeededRng(1), GenerationMode::degree_guided, {}, 4);
  const GenerationBatch b = generate_batch(p, prior, s, 12, SeededRng(1), GenerationMode::degree_guided, {}, 1);
  REQUIRE(a.graphs.graphs.size() == 12);
  CHECK(a.graphs.graphs == b.graphs.graphs);
  for (const GenerationTrace& tr : a.traces) CHECK(tr.seconds >= 0.0);
  const GenerationBatch c = generate_batch(p, prior, s, 12, SeededRng(2));
  CHECK(c.graphs.graphs != a.graphs.graphs);
  const GenerationBatch learned = generate_batch(p, prior, s, 3, SeededRng(1), GenerationMode::learned_selection);
  for (const Graph& x : learned.graphs.graphs) CHECK(x.num_nodes() == 18);
}
