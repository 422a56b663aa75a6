// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/generator.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <stdexcept>

#include "edgediffuse/forward.hpp"
#include "edgediffuse/parallel.hpp"

namespace edgediffuse {

namespace {

ActiveMask draw_mask(int n, const std::function<double(int)>& prob, SeededRng& rng,
                     const GenerationOptions& options) {
  ActiveMask mask(static_cast<std::size_t>(n));
  auto draw = [&] {
    int k = 0;
    for (int i = 0; i < n; ++i) {
      mask[static_cast<std::size_t>(i)] = rng.bernoulli(prob(i)) ? 1 : 0;
      k += mask[static_cast<std::size_t>(i)];
    }
    return k;
  };
  int k = draw();
  if (options.max_active <= 0 || k <= options.max_active) return mask;
  for (int attempt = 0; attempt < 100 && k > options.max_active; ++attempt) k = draw();
  if (k > options.max_active) {
    std::vector<int> active;
    for (int i = 0; i < n; ++i) {
      if (mask[static_cast<std::size_t>(i)]) active.push_back(i);
    }
    rng.shuffle(active);
    for (std::size_t j = static_cast<std::size_t>(options.max_active); j < active.size(); ++j) {
      mask[static_cast<std::size_t>(active[j])] = 0;
    }
  }
  return mask;
}

/// Keeps every edge of A^t and adds Bernoulli(l_ij) edges between co-active
/// non-adjacent nodes, visited in random order.
///
/// With `capacity` (remaining degree budget per node) the draw is restricted
/// to the support of the degree-guided posterior: an edge is accepted only
/// while both endpoints have budget left, an active node that received no
/// edge is given one partner drawn in proportion to l_ij, and at t = 1 the
/// remaining budgets are filled the same way until no admissible pair is left.
Graph reverse_step(const Graph& cur, const EdgeLogits& logits, std::vector<int>* capacity, int t,
                   SeededRng& rng, std::size_t* added) {
  const std::size_t P = logits.pairs.size();
  std::vector<std::size_t> order(P);
  for (std::size_t k = 0; k < P; ++k) order[k] = k;
  rng.shuffle(order);
  std::vector<Edge> edges = cur.edges();
  std::vector<char> taken(P, 0);
  for (std::size_t k = 0; k < P; ++k) {
    const Edge& e = logits.pairs[k];
    if (cur.has_edge(e.u, e.v)) taken[k] = 1;
  }
  std::vector<char> touched(static_cast<std::size_t>(cur.num_nodes()), 0);
  *added = 0;

  auto budget = [&](int i) -> int& { return (*capacity)[static_cast<std::size_t>(i)]; };
  auto admissible = [&](std::size_t k) {
    const Edge& e = logits.pairs[k];
    return !taken[k] && (capacity == nullptr || (budget(e.u) > 0 && budget(e.v) > 0));
  };
  auto accept = [&](std::size_t k) {
    const Edge& e = logits.pairs[k];
    taken[k] = 1;
    if (capacity != nullptr) {
      --budget(e.u);
      --budget(e.v);
    }
    touched[static_cast<std::size_t>(e.u)] = touched[static_cast<std::size_t>(e.v)] = 1;
    edges.push_back(e);
    ++*added;
  };
  // Pick one admissible pair among `cands` with weight l_ij.
  auto pick = [&](const std::vector<std::size_t>& cands) {
    std::vector<double> w;
    w.reserve(cands.size());
    for (std::size_t k : cands) w.push_back(std::max(logits.probs[k], 1e-12));
    return cands[rng.categorical(w)];
  };

  const bool complete = capacity != nullptr && t == 1;
  if (!complete) {
    for (std::size_t k : order) {
      if (admissible(k) && rng.bernoulli(logits.probs[k])) accept(k);
    }
  }
  if (capacity == nullptr) return Graph(cur.num_nodes(), std::move(edges));

  std::vector<int> active;
  for (const Edge& e : logits.pairs) {
    active.push_back(e.u);
    active.push_back(e.v);
  }
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  rng.shuffle(active);
  std::vector<std::size_t> cands;
  for (int i : active) {
    if (complete || touched[static_cast<std::size_t>(i)] || budget(i) <= 0) continue;
    cands.clear();
    for (std::size_t k = 0; k < P; ++k) {
      const Edge& e = logits.pairs[k];
      if ((e.u == i || e.v == i) && admissible(k)) cands.push_back(k);
    }
    if (!cands.empty()) accept(pick(cands));
  }
  if (complete) {
    // Largest remaining budget first, partners weighted by l_ij times their
    // budget, which avoids stranding a single node with a deficit.
    for (;;) {
      int best = -1;
      for (int i : active) {
        if (budget(i) > 0 && (best < 0 || budget(i) > budget(best))) {
          bool any = false;
          for (std::size_t k = 0; k < P && !any; ++k) {
            const Edge& e = logits.pairs[k];
            any = (e.u == i || e.v == i) && admissible(k);
          }
          if (any) best = i;
        }
      }
      if (best < 0) break;
      cands.clear();
      std::vector<double> w;
      for (std::size_t k = 0; k < P; ++k) {
        const Edge& e = logits.pairs[k];
        if ((e.u == best || e.v == best) && admissible(k)) {
          cands.push_back(k);
          const int other = e.u == best ? e.v : e.u;
          w.push_back(std::max(logits.probs[k], 1e-12) * budget(other));
        }
      }
      accept(cands[rng.categorical(w)]);
    }
  }
  return Graph(cur.num_nodes(), std::move(edges));
}

/// Greedy check that the remaining budgets can still be met by edges on
/// non-adjacent pairs of `g`. Succeeding proves realizability; failing is
/// treated as leaving the support.
bool budgets_realizable(const Graph& g, const std::vector<int>& capacity) {
  std::vector<int> nodes;
  for (std::size_t i = 0; i < capacity.size(); ++i) {
    if (capacity[i] > 0) nodes.push_back(static_cast<int>(i));
  }
  std::vector<int> left(capacity.begin(), capacity.end());
  std::vector<Edge> extra;
  auto adjacent = [&](int a, int b) {
    if (g.has_edge(a, b)) return true;
    const Edge e{std::min(a, b), std::max(a, b)};
    return std::find(extra.begin(), extra.end(), e) != extra.end();
  };
  for (;;) {
    int u = -1;
    for (int i : nodes) {
      if (left[static_cast<std::size_t>(i)] > 0 && (u < 0 || left[static_cast<std::size_t>(i)] > left[static_cast<std::size_t>(u)])) u = i;
    }
    if (u < 0) return true;
    std::vector<int> partners;
    for (int j : nodes) {
      if (j != u && left[static_cast<std::size_t>(j)] > 0 && !adjacent(u, j)) partners.push_back(j);
    }
    std::stable_sort(partners.begin(), partners.end(), [&](int a, int b) {
      return left[static_cast<std::size_t>(a)] > left[static_cast<std::size_t>(b)];
    });
    const auto need = static_cast<std::size_t>(left[static_cast<std::size_t>(u)]);
    if (partners.size() < need) return false;
    for (std::size_t k = 0; k < need; ++k) {
      --left[static_cast<std::size_t>(partners[k])];
      extra.push_back({std::min(u, partners[k]), std::max(u, partners[k])});
    }
    left[static_cast<std::size_t>(u)] = 0;
  }
}

constexpr int kStepAttempts = 20;
constexpr std::size_t kCheckLimit = 256;

template <typename MaskFn>
GenerationTrace run_reverse(const ModelParams& params, const DegreeVector& d0_input, int n,
                            const NoiseSchedule& s, SeededRng& rng, MaskFn&& mask_fn,
                            std::vector<int>* capacity) {
  if (s.steps() != params.arch.steps) {
    throw std::invalid_argument("generation: schedule length differs from the trained T");
  }
  const auto start = std::chrono::steady_clock::now();
  GenerationTrace trace;
  Graph cur = Graph::empty(n);
  for (int t = s.steps(); t >= 1; --t) {
    const NodeEmbeddings z = embed_nodes(cur, d0_input, t, params);
    const ActiveMask mask = mask_fn(cur, z, t);
    const EdgeLogits logits = predict_edges(z, mask, params);

    StepRecord rec;
    rec.t = t;
    for (auto m : mask) rec.active += m;
    rec.input_edges = cur.num_edges();
    rec.predicted_pairs = logits.pairs.size();
    rec.message_ops = static_cast<std::size_t>(params.arch.layers) * cur.num_edges();
    if (capacity == nullptr) {
      cur = reverse_step(cur, logits, nullptr, t, rng, &rec.edges_added);
    } else {
      // Redraw a step whose leftover budgets can no longer be met; the
      // degree-guided posterior puts no mass on such states.
      std::size_t deficient = 0;
      for (int c : *capacity) deficient += c > 0 ? 1 : 0;
      const std::vector<int> before = *capacity;
      Graph best;
      std::vector<int> best_capacity;
      std::size_t best_added = 0;
      for (int attempt = 0; attempt < kStepAttempts; ++attempt) {
        std::vector<int> budget = before;
        std::size_t added = 0;
        Graph next = reverse_step(cur, logits, &budget, t, rng, &added);
        bool ok;
        if (t == 1) {
          ok = std::all_of(budget.begin(), budget.end(), [](int c) { return c == 0; });
        } else {
          ok = deficient > kCheckLimit || budgets_realizable(next, budget);
        }
        if (attempt == 0 || ok) {
          best = std::move(next);
          best_capacity = std::move(budget);
          best_added = added;
        }
        if (ok) break;
      }
      cur = std::move(best);
      *capacity = std::move(best_capacity);
      rec.edges_added = best_added;
    }
    rec.cumulative_edges = cur.num_edges();
    trace.steps.push_back(rec);
  }
  trace.final_graph = std::move(cur);
  trace.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace

GenerationTrace generate_from_degrees(const ModelParams& params, const DegreeVector& d0,
                                      const NoiseSchedule& s, SeededRng& rng,
                                      const GenerationOptions& options) {
  for (int d : d0) {
    if (d < 0) throw std::invalid_argument("generation: negative target degree");
  }
  const int n = static_cast<int>(d0.size());
  std::vector<int> capacity(d0.begin(), d0.end());
  auto mask_fn = [&](const Graph& cur, const NodeEmbeddings&, int t) {
    return draw_mask(
        n,
        [&](int i) {
          return reverse_active_prob(d0[static_cast<std::size_t>(i)], cur.degree(i), s, t);
        },
        rng, options);
  };
  GenerationTrace trace = run_reverse(params, d0, n, s, rng, mask_fn, &capacity);
  trace.target_degrees = d0;
  return trace;
}

GenerationTrace generate_degree_guided(const ModelParams& params, const DegreePrior& prior,
                                       const NoiseSchedule& s, SeededRng& rng,
                                       const GenerationOptions& options) {
  const DegreeVector d0 = prior.sample(rng);
  return generate_from_degrees(params, d0, s, rng, options);
}

GenerationTrace generate_learned_selection(const ModelParams& params, int n, const NoiseSchedule& s,
                                           SeededRng& rng, const GenerationOptions& options) {
  if (n < 0) throw std::invalid_argument("generation: negative node count");
  // Without degree guidance the target-degree channel carries no information.
  const DegreeVector zeros(static_cast<std::size_t>(n), 0);
  auto mask_fn = [&](const Graph&, const NodeEmbeddings& z, int) {
    const std::vector<double> probs = predict_node_selection(z, params);
    return draw_mask(n, [&](int i) { return probs[static_cast<std::size_t>(i)]; }, rng, options);
  };
  return run_reverse(params, zeros, n, s, rng, mask_fn, nullptr);
}

GenerationBatch generate_batch(const ModelParams& params, const DegreePrior& prior,
                               const NoiseSchedule& s, std::size_t count, const SeededRng& rng,
                               GenerationMode mode, const GenerationOptions& options, int threads) {
  GenerationBatch batch;
  batch.graphs.name = "generated";
  batch.traces.resize(count);
  parallel_for(
      count,
      [&](std::size_t i) {
        SeededRng child = rng.child(i);
        if (mode == GenerationMode::degree_guided) {
          batch.traces[i] = generate_degree_guided(params, prior, s, child, options);
        } else {
          const int n = static_cast<int>(prior.sample(child).size());
          batch.traces[i] = generate_learned_selection(params, n, s, child, options);
        }
      },
      threads);
  batch.graphs.graphs.reserve(count);
  for (const auto& tr : batch.traces) batch.graphs.graphs.push_back(tr.final_graph);
  return batch;
}

}  // namespace edgediffuse
