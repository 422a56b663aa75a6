// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "edgediffuse/forward.hpp"
#include "edgediffuse/graph.hpp"
#include "edgediffuse/linalg.hpp"
#include "edgediffuse/rng.hpp"

namespace edgediffuse {

struct Architecture {
  int layers = 2;
  int hidden = 16;  // must be even: half per degree embedding
  int degree_clamp = 64;
  int steps = 32;   // diffusion length the model was built for
};

/// Learnable weights of the node-embedding network and its two heads.
///
/// Per block l: the shared sinusoidal step embedding is projected by
/// time_w/time_b, node states are updated residually with
///   Z += tanh(Z self_w + (A Z) msg_w + 1 (t_l + c ctx_w))
/// and the context vector is remixed from [mean(Z) | c].
struct ModelParams {
  struct Block {
    Matrix time_w, time_b;
    Matrix self_w, msg_w, ctx_w;
    Matrix ctx_mix_w, ctx_mix_b;
  };

  Architecture arch;
  Matrix emb_current;  // degree-bucket embedding of d^t
  Matrix emb_target;   // degree-bucket embedding of d^0
  std::vector<Block> blocks;
  Matrix edge_w1, edge_b1, edge_w2, edge_b2;
  Matrix select_w, select_b;

  /// Zero-valued parameters with the shapes implied by `arch`.
  static ModelParams zeros(const Architecture& arch);
  /// Glorot-uniform weights, zero biases.
  static ModelParams initialize(const Architecture& arch, SeededRng& rng);

  /// Calls f(name, matrix) for every tensor in a fixed order.
  template <typename F>
  void visit(F&& f) {
    visit_impl(*this, f);
  }
  template <typename F>
  void visit(F&& f) const {
    visit_impl(*this, f);
  }

  std::size_t parameter_count() const;
  bool all_finite() const;

 private:
  template <typename Self, typename F>
  static void visit_impl(Self& self, F& f) {
    f("emb_current", self.emb_current);
    f("emb_target", self.emb_target);
    for (std::size_t l = 0; l < self.blocks.size(); ++l) {
      auto& b = self.blocks[l];
      const std::string p = "block" + std::to_string(l) + ".";
      f(p + "time_w", b.time_w);
      f(p + "time_b", b.time_b);
      f(p + "self_w", b.self_w);
      f(p + "msg_w", b.msg_w);
      f(p + "ctx_w", b.ctx_w);
      f(p + "ctx_mix_w", b.ctx_mix_w);
      f(p + "ctx_mix_b", b.ctx_mix_b);
    }
    f("edge_w1", self.edge_w1);
    f("edge_b1", self.edge_b1);
    f("edge_w2", self.edge_w2);
    f("edge_b2", self.edge_b2);
    f("select_w", self.select_w);
    f("select_b", self.select_b);
  }
};

struct NodeEmbeddings {
  Matrix z;                    // n x hidden
  Matrix context;              // 1 x hidden
  std::vector<Matrix> hidden;  // node states after each block
};

/// Bernoulli parameters for pairs of active nodes.
struct EdgeLogits {
  std::vector<Edge> pairs;
  std::vector<double> probs;
};

/// p_theta(A^{t-1} | A^t, s^t): active pairs follow the predicted
/// probabilities, every other pair keeps its value in A^t.
class ReverseEdgeDistribution {
 public:
  ReverseEdgeDistribution(Graph current, ActiveMask mask, EdgeLogits logits);

  double prob(int i, int j) const;
  const EdgeLogits& active_pairs() const { return logits_; }
  const ActiveMask& mask() const { return mask_; }
  const Graph& current() const { return current_; }
  Graph sample(SeededRng& rng) const;

 private:
  Graph current_;
  ActiveMask mask_;
  EdgeLogits logits_;
};

/// Sinusoidal embedding of diffusion step t, width `dim` (even).
Matrix step_embedding(int t, int dim);

/// Degree bucket used for the embedding lookup.
int degree_bucket(int degree, int degree_clamp);

NodeEmbeddings embed_nodes(const Graph& g, const DegreeVector& d0, int t, const ModelParams& params);

/// All pairs i < j of active nodes, row-major over the active set.
std::vector<Edge> active_pairs(const ActiveMask& mask);

EdgeLogits predict_edges(const NodeEmbeddings& z, const ActiveMask& mask, const ModelParams& params);

ReverseEdgeDistribution reverse_edge_distribution(const Graph& current, const ActiveMask& mask,
                                                  const EdgeLogits& logits);

std::vector<double> predict_node_selection(const NodeEmbeddings& z, const ModelParams& params);

/// One reverse transition used as a training example.
struct TransitionBatch {
  const Graph* previous = nullptr;  // A^{t-1}
  const Graph* current = nullptr;   // A^t
  ActiveMask mask;                  // s^t
  DegreeVector target_degrees;      // d^0 fed to the network
  int t = 1;
};

struct LossOptions {
  /// Negatives are subsampled once K(K-1)/2 exceeds negative_cap_factor * K.
  int negative_cap_factor = 20;
  double eps = 1e-7;
  /// Adds the cross-entropy of the node-selection head against s^t.
  bool include_selection = false;
};

struct LossResult {
  double loss = 0.0;            // edge_loss + selection_loss
  double edge_loss = 0.0;
  double selection_loss = 0.0;
  std::size_t scored_pairs = 0;
  ModelParams grad;
};

/// Clamped Bernoulli cross-entropy, sum_k -w_k log p(y_k).
double bernoulli_cross_entropy(const std::vector<double>& probs, const std::vector<double>& targets,
                               const std::vector<double>& weights, double eps = 1e-7);

/// -log p_theta(A^{t-1} | A^t, s^t, d^0) and its gradient. `rng` drives
/// negative subsampling only.
LossResult loss_and_grad(const TransitionBatch& batch, const ModelParams& params,
                         const LossOptions& options, SeededRng& rng);

/// Same loss without the backward pass.
double evaluate_loss(const TransitionBatch& batch, const ModelParams& params,
                     const LossOptions& options, SeededRng& rng);

}  // namespace edgediffuse
