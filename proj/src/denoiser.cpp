// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "edgediffuse/tape.hpp"

namespace edgediffuse {

ModelParams ModelParams::zeros(const Architecture& arch) {
  if (arch.hidden < 2 || arch.hidden % 2 != 0) {
    throw std::invalid_argument("Architecture: hidden width must be even and >= 2");
  }
  if (arch.layers < 0 || arch.degree_clamp < 1 || arch.steps < 1) {
    throw std::invalid_argument("Architecture: invalid layers, degree clamp or steps");
  }
  const int d = arch.hidden;
  const int buckets = arch.degree_clamp + 1;
  ModelParams p;
  p.arch = arch;
  p.emb_current = Matrix(buckets, d / 2);
  p.emb_target = Matrix(buckets, d / 2);
  p.blocks.resize(static_cast<std::size_t>(arch.layers));
  for (Block& b : p.blocks) {
    b.time_w = Matrix(d, d);
    b.time_b = Matrix(1, d);
    b.self_w = Matrix(d, d);
    b.msg_w = Matrix(d, d);
    b.ctx_w = Matrix(d, d);
    b.ctx_mix_w = Matrix(2 * d, d);
    b.ctx_mix_b = Matrix(1, d);
  }
  p.edge_w1 = Matrix(d, d);
  p.edge_b1 = Matrix(1, d);
  p.edge_w2 = Matrix(d, 1);
  p.edge_b2 = Matrix(1, 1);
  p.select_w = Matrix(d, 1);
  p.select_b = Matrix(1, 1);
  return p;
}

ModelParams ModelParams::initialize(const Architecture& arch, SeededRng& rng) {
  ModelParams p = zeros(arch);
  auto glorot = [&rng](Matrix& m, double gain) {
    const double limit = gain * std::sqrt(6.0 / (m.rows() + m.cols()));
    for (double& x : m.data()) x = (2.0 * rng.uniform() - 1.0) * limit;
  };
  auto uniform = [&rng](Matrix& m, double scale) {
    for (double& x : m.data()) x = (2.0 * rng.uniform() - 1.0) * scale;
  };
  uniform(p.emb_current, 0.5);
  uniform(p.emb_target, 0.5);
  for (Block& b : p.blocks) {
    glorot(b.time_w, 1.0);
    glorot(b.self_w, 1.0);
    // Neighbor sums grow with degree.
    glorot(b.msg_w, 0.5);
    glorot(b.ctx_w, 1.0);
    glorot(b.ctx_mix_w, 1.0);
  }
  glorot(p.edge_w1, 1.0);
  glorot(p.edge_w2, 1.0);
  glorot(p.select_w, 1.0);
  return p;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  visit([&n](const std::string&, const Matrix& m) { n += m.size(); });
  return n;
}

bool ModelParams::all_finite() const {
  bool ok = true;
  visit([&ok](const std::string&, const Matrix& m) {
    for (double x : m.data()) ok = ok && std::isfinite(x);
  });
  return ok;
}

Matrix step_embedding(int t, int dim) {
  Matrix e(1, dim);
  for (int k = 0; 2 * k < dim; ++k) {
    const double freq = std::pow(10000.0, -2.0 * k / dim);
    e(0, 2 * k) = std::sin(t * freq);
    if (2 * k + 1 < dim) e(0, 2 * k + 1) = std::cos(t * freq);
  }
  return e;
}

int degree_bucket(int degree, int degree_clamp) { return std::clamp(degree, 0, degree_clamp); }

namespace {

struct EmbeddingVars {
  Var z;
  Var context;
  std::vector<Var> hidden;
};

/// Records the embedding network on `tape`. Parameter adjoints go to `grad`
/// when it is non-null.
EmbeddingVars record_embeddings(GradTape& tape, const Graph& g, const DegreeVector& d0, int t,
                                const ModelParams& p, ModelParams* grad) {
  const int n = g.num_nodes();
  if (d0.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("embed_nodes: target degree vector length differs from node count");
  }
  auto param = [&](const Matrix& m, Matrix* sink) {
    return tape.parameter(m, grad != nullptr ? sink : nullptr);
  };

  std::vector<int> cur(static_cast<std::size_t>(n));
  std::vector<int> tgt(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cur[static_cast<std::size_t>(i)] = degree_bucket(g.degree(i), p.arch.degree_clamp);
    tgt[static_cast<std::size_t>(i)] = degree_bucket(d0[static_cast<std::size_t>(i)], p.arch.degree_clamp);
  }
  const Var emb_cur = param(p.emb_current, grad ? &grad->emb_current : nullptr);
  const Var emb_tgt = param(p.emb_target, grad ? &grad->emb_target : nullptr);
  Var z = tape.concat_cols(tape.gather_rows(emb_cur, std::move(cur)),
                           tape.gather_rows(emb_tgt, std::move(tgt)));
  Var c = tape.mean_rows(z);
  const Var t_emb = tape.constant(step_embedding(t, p.arch.hidden));

  EmbeddingVars out;
  for (std::size_t l = 0; l < p.blocks.size(); ++l) {
    const auto& b = p.blocks[l];
    ModelParams::Block* gb = grad ? &grad->blocks[l] : nullptr;
    const Var time_w = param(b.time_w, gb ? &gb->time_w : nullptr);
    const Var time_b = param(b.time_b, gb ? &gb->time_b : nullptr);
    const Var self_w = param(b.self_w, gb ? &gb->self_w : nullptr);
    const Var msg_w = param(b.msg_w, gb ? &gb->msg_w : nullptr);
    const Var ctx_w = param(b.ctx_w, gb ? &gb->ctx_w : nullptr);
    const Var mix_w = param(b.ctx_mix_w, gb ? &gb->ctx_mix_w : nullptr);
    const Var mix_b = param(b.ctx_mix_b, gb ? &gb->ctx_mix_b : nullptr);

    const Var shift = tape.add(tape.add_row(tape.matmul(t_emb, time_w), time_b),
                               tape.matmul(c, ctx_w));
    const Var messages = tape.neighbor_sum(z, g);
    const Var pre = tape.add_row(
        tape.add(tape.matmul(z, self_w), tape.matmul(messages, msg_w)), shift);
    z = tape.add(z, tape.tanh(pre));
    c = tape.tanh(tape.add_row(tape.matmul(tape.concat_cols(tape.mean_rows(z), c), mix_w), mix_b));
    out.hidden.push_back(z);
  }
  out.z = z;
  out.context = c;
  return out;
}

Var record_edge_head(GradTape& tape, Var z, std::vector<Edge> pairs, const ModelParams& p,
                     ModelParams* grad) {
  auto param = [&](const Matrix& m, Matrix* sink) {
    return tape.parameter(m, grad != nullptr ? sink : nullptr);
  };
  const Var w1 = param(p.edge_w1, grad ? &grad->edge_w1 : nullptr);
  const Var b1 = param(p.edge_b1, grad ? &grad->edge_b1 : nullptr);
  const Var w2 = param(p.edge_w2, grad ? &grad->edge_w2 : nullptr);
  const Var b2 = param(p.edge_b2, grad ? &grad->edge_b2 : nullptr);
  const Var hidden = tape.tanh(tape.add_row(tape.matmul(tape.pair_sum(z, std::move(pairs)), w1), b1));
  return tape.add_row(tape.matmul(hidden, w2), b2);
}

Var record_select_head(GradTape& tape, Var z, const ModelParams& p, ModelParams* grad) {
  const Var w = tape.parameter(p.select_w, grad ? &grad->select_w : nullptr);
  const Var b = tape.parameter(p.select_b, grad ? &grad->select_b : nullptr);
  return tape.add_row(tape.matmul(z, w), b);
}

}  // namespace

NodeEmbeddings embed_nodes(const Graph& g, const DegreeVector& d0, int t, const ModelParams& params) {
  GradTape tape;
  const EmbeddingVars vars = record_embeddings(tape, g, d0, t, params, nullptr);
  NodeEmbeddings out;
  out.z = tape.value(vars.z);
  out.context = tape.value(vars.context);
  for (Var h : vars.hidden) out.hidden.push_back(tape.value(h));
  for (double x : out.z.data()) {
    if (!std::isfinite(x)) throw std::runtime_error("embed_nodes: non-finite node state");
  }
  return out;
}

std::vector<Edge> active_pairs(const ActiveMask& mask) {
  std::vector<int> active;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) active.push_back(static_cast<int>(i));
  }
  std::vector<Edge> pairs;
  pairs.reserve(active.size() * (active.size() > 0 ? active.size() - 1 : 0) / 2);
  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) pairs.push_back({active[a], active[b]});
  }
  return pairs;
}

EdgeLogits predict_edges(const NodeEmbeddings& z, const ActiveMask& mask, const ModelParams& params) {
  if (mask.size() != static_cast<std::size_t>(z.z.rows())) {
    throw std::invalid_argument("predict_edges: mask length differs from embedding rows");
  }
  EdgeLogits out;
  out.pairs = active_pairs(mask);
  if (out.pairs.empty()) return out;
  GradTape tape;
  const Var zv = tape.constant(z.z);
  const Var logits = record_edge_head(tape, zv, out.pairs, params, nullptr);
  out.probs.reserve(out.pairs.size());
  for (double x : tape.value(logits).data()) out.probs.push_back(sigmoid(x));
  return out;
}

ReverseEdgeDistribution::ReverseEdgeDistribution(Graph current, ActiveMask mask, EdgeLogits logits)
    : current_(std::move(current)), mask_(std::move(mask)), logits_(std::move(logits)) {
  if (mask_.size() != static_cast<std::size_t>(current_.num_nodes())) {
    throw std::invalid_argument("reverse_edge_distribution: mask length differs from node count");
  }
  if (logits_.pairs != edgediffuse::active_pairs(mask_) || logits_.probs.size() != logits_.pairs.size()) {
    throw std::invalid_argument("reverse_edge_distribution: logits do not cover the active pairs");
  }
}

double ReverseEdgeDistribution::prob(int i, int j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  if (mask_[static_cast<std::size_t>(i)] && mask_[static_cast<std::size_t>(j)]) {
    const auto it = std::lower_bound(logits_.pairs.begin(), logits_.pairs.end(), Edge{i, j});
    return logits_.probs[static_cast<std::size_t>(it - logits_.pairs.begin())];
  }
  return current_.has_edge(i, j) ? 1.0 : 0.0;
}

Graph ReverseEdgeDistribution::sample(SeededRng& rng) const {
  std::vector<Edge> edges;
  for (const Edge& e : current_.edges()) {
    if (!(mask_[static_cast<std::size_t>(e.u)] && mask_[static_cast<std::size_t>(e.v)])) {
      edges.push_back(e);
    }
  }
  for (std::size_t k = 0; k < logits_.pairs.size(); ++k) {
    if (rng.bernoulli(logits_.probs[k])) edges.push_back(logits_.pairs[k]);
  }
  return Graph(current_.num_nodes(), std::move(edges));
}

ReverseEdgeDistribution reverse_edge_distribution(const Graph& current, const ActiveMask& mask,
                                                  const EdgeLogits& logits) {
  return ReverseEdgeDistribution(current, mask, logits);
}

std::vector<double> predict_node_selection(const NodeEmbeddings& z, const ModelParams& params) {
  GradTape tape;
  const Var logits = record_select_head(tape, tape.constant(z.z), params, nullptr);
  std::vector<double> probs;
  probs.reserve(static_cast<std::size_t>(z.z.rows()));
  for (double x : tape.value(logits).data()) probs.push_back(sigmoid(x));
  return probs;
}

double bernoulli_cross_entropy(const std::vector<double>& probs, const std::vector<double>& targets,
                               const std::vector<double>& weights, double eps) {
  if (probs.size() != targets.size() || probs.size() != weights.size()) {
    throw std::invalid_argument("bernoulli_cross_entropy: length mismatch");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double p = std::clamp(probs[k], eps, 1.0 - eps);
    total -= weights[k] * (targets[k] * std::log(p) + (1.0 - targets[k]) * std::log(1.0 - p));
  }
  return total;
}

namespace {

struct ScoredPairs {
  std::vector<Edge> pairs;
  std::vector<double> targets;
  std::vector<double> weights;
};

/// Active pairs with targets from A^{t-1}; negatives are subsampled without
/// replacement above the cap and reweighted to keep the sum unbiased.
ScoredPairs select_pairs(const TransitionBatch& batch, const LossOptions& options, SeededRng& rng) {
  const std::vector<Edge> all = active_pairs(batch.mask);
  ScoredPairs out;
  std::size_t active = 0;
  for (auto s : batch.mask) active += s ? 1 : 0;
  const std::size_t cap = static_cast<std::size_t>(options.negative_cap_factor) * active;

  std::vector<Edge> negatives;
  for (const Edge& e : all) {
    if (batch.previous->has_edge(e.u, e.v)) {
      out.pairs.push_back(e);
      out.targets.push_back(1.0);
      out.weights.push_back(1.0);
    } else {
      negatives.push_back(e);
    }
  }
  if (all.size() <= cap || negatives.size() <= cap) {
    for (const Edge& e : negatives) {
      out.pairs.push_back(e);
      out.targets.push_back(0.0);
      out.weights.push_back(1.0);
    }
    return out;
  }
  // Partial Fisher-Yates for a uniform subset of size cap.
  for (std::size_t k = 0; k < cap; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.uniform_index(negatives.size() - k));
    std::swap(negatives[k], negatives[j]);
  }
  const double weight = static_cast<double>(negatives.size()) / static_cast<double>(cap);
  for (std::size_t k = 0; k < cap; ++k) {
    out.pairs.push_back(negatives[k]);
    out.targets.push_back(0.0);
    out.weights.push_back(weight);
  }
  return out;
}

LossResult run_loss(const TransitionBatch& batch, const ModelParams& params,
                    const LossOptions& options, SeededRng& rng, bool with_grad) {
  if (batch.previous == nullptr || batch.current == nullptr) {
    throw std::invalid_argument("loss: batch graphs missing");
  }
  const int n = batch.current->num_nodes();
  if (batch.previous->num_nodes() != n || batch.mask.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("loss: batch shapes are inconsistent");
  }

  LossResult result;
  if (with_grad) result.grad = ModelParams::zeros(params.arch);

  ScoredPairs scored = select_pairs(batch, options, rng);
  result.scored_pairs = scored.pairs.size();
  if (scored.pairs.empty() && !options.include_selection) return result;

  GradTape tape;
  ModelParams* grad = with_grad ? &result.grad : nullptr;
  const EmbeddingVars vars =
      record_embeddings(tape, *batch.current, batch.target_degrees, batch.t, params, grad);

  Var total = tape.constant(Matrix(1, 1));
  if (!scored.pairs.empty()) {
    const Var logits = record_edge_head(tape, vars.z, std::move(scored.pairs), params, grad);
    const Var edge = tape.bce_with_logits(logits, std::move(scored.targets),
                                          std::move(scored.weights), options.eps);
    result.edge_loss = tape.value(edge)(0, 0);
    total = tape.add_scalars(total, edge);
  }
  if (options.include_selection) {
    const Var logits = record_select_head(tape, vars.z, params, grad);
    std::vector<double> targets(batch.mask.begin(), batch.mask.end());
    std::vector<double> weights(targets.size(), 1.0);
    const Var sel = tape.bce_with_logits(logits, std::move(targets), std::move(weights), options.eps);
    result.selection_loss = tape.value(sel)(0, 0);
    total = tape.add_scalars(total, sel);
  }
  result.loss = tape.value(total)(0, 0);
  if (!std::isfinite(result.loss)) throw std::runtime_error("loss: non-finite value");
  if (with_grad) tape.backward(total);
  return result;
}

}  // namespace

LossResult loss_and_grad(const TransitionBatch& batch, const ModelParams& params,
                         const LossOptions& options, SeededRng& rng) {
  return run_loss(batch, params, options, rng, true);
}

double evaluate_loss(const TransitionBatch& batch, const ModelParams& params,
                     const LossOptions& options, SeededRng& rng) {
  return run_loss(batch, params, options, rng, false).loss;
}

}  // namespace edgediffuse
