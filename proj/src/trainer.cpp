// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "edgediffuse/trainer.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

#include "edgediffuse/degree_model.hpp"
#include "edgediffuse/forward.hpp"

namespace edgediffuse {

void TrainConfig::validate() const {
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (steps_per_epoch <= 0) throw std::invalid_argument("steps-per-epoch must be positive");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw std::invalid_argument("momentum must lie in [0, 1)");
  if (!(clip_norm > 0.0)) throw std::invalid_argument("clip norm must be positive");
  if (negative_cap_factor <= 0) throw std::invalid_argument("negative cap must be positive");
  if (checkpoint_every < 0) throw std::invalid_argument("checkpoint cadence must be >= 0");
}

void apply_update(OptimizerState& opt, ModelParams grad, const TrainConfig& cfg) {
  double norm2 = 0.0;
  grad.visit([&norm2](const std::string&, const Matrix& g) { norm2 += squared_norm(g); });
  const double norm = std::sqrt(norm2);
  const double scale = norm > cfg.clip_norm ? cfg.clip_norm / norm : 1.0;

  std::vector<Matrix*> params;
  std::vector<Matrix*> velocity;
  std::vector<Matrix*> grads;
  opt.params.visit([&](const std::string&, Matrix& m) { params.push_back(&m); });
  opt.velocity.visit([&](const std::string&, Matrix& m) { velocity.push_back(&m); });
  grad.visit([&](const std::string&, Matrix& m) { grads.push_back(&m); });
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& v = velocity[k]->data();
    auto& p = params[k]->data();
    const auto& g = grads[k]->data();
    for (std::size_t i = 0; i < p.size(); ++i) {
      v[i] = cfg.momentum * v[i] + scale * g[i];
      p[i] -= cfg.learning_rate * v[i];
    }
  }
}

LossBreakdown train_step(const Graph& a0, const DegreeVector& d0, const NoiseSchedule& s,
                         OptimizerState& opt, const TrainConfig& cfg, SeededRng& rng) {
  if (d0.size() != static_cast<std::size_t>(a0.num_nodes())) {
    throw std::invalid_argument("train_step: d0 length differs from node count");
  }
  LossBreakdown out;
  out.t = static_cast<int>(rng.uniform_int(1, s.steps()));
  const Graph prev = sample_from_origin(a0, s, out.t - 1, rng);
  const Graph cur = sample_step(prev, s, out.t, rng);

  TransitionBatch batch{&prev, &cur, active_mask(prev, cur), d0, out.t};
  LossOptions options;
  options.negative_cap_factor = cfg.negative_cap_factor;
  options.include_selection = cfg.train_selection;

  LossResult r;
  try {
    r = loss_and_grad(batch, opt.params, options, rng);
  } catch (const std::runtime_error&) {
    out.skipped = true;
    return out;
  }
  bool finite_grad = true;
  r.grad.visit([&finite_grad](const std::string&, const Matrix& g) {
    for (double x : g.data()) finite_grad = finite_grad && std::isfinite(x);
  });
  if (!finite_grad) {
    out.skipped = true;
    return out;
  }

  out.edge_term = r.edge_loss;
  out.rec_term = out.t == 1 ? r.edge_loss : 0.0;
  // Degree guidance makes node selection exact; only the optional learned
  // head contributes here.
  out.node_term = cfg.train_selection ? r.selection_loss : 0.0;
  assert(cfg.train_selection || out.node_term == 0.0);

  if (r.loss != 0.0) {
    apply_update(opt, std::move(r.grad), cfg);
    out.updated = true;
  }
  return out;
}

double kl_bernoulli(double q, double p, double eps) {
  if (!(q >= 0.0 && q <= 1.0) || !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("kl_bernoulli: probabilities must lie in [0, 1]");
  }
  p = std::clamp(p, eps, 1.0 - eps);
  double kl = 0.0;
  if (q > 0.0) kl += q * std::log(q / p);
  if (q < 1.0) kl += (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
  return std::max(kl, 0.0);
}

VlbEstimate vlb_estimate(const Graph& a0, const DegreeVector& d0, const NoiseSchedule& s,
                         const ModelParams& params, std::size_t n_samples, SeededRng& rng) {
  if (n_samples == 0) throw std::invalid_argument("vlb_estimate: n_samples must be positive");
  if (!s.absorbing() || s.p() != 0.0) {
    throw std::invalid_argument("vlb_estimate: requires an absorbing edge-removal schedule");
  }
  LossOptions options;
  double sum_edge = 0.0, sum_edge2 = 0.0, sum_rec = 0.0, sum_rec2 = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Trajectory traj = sample_trajectory(a0, s, rng);
    double edge = 0.0;
    double rec = 0.0;
    for (int t = 1; t <= s.steps(); ++t) {
      const auto ti = static_cast<std::size_t>(t);
      TransitionBatch batch{&traj.graphs[ti - 1], &traj.graphs[ti], traj.masks[ti - 1], d0, t};
      const double l = evaluate_loss(batch, params, options, rng);
      edge += l;
      if (t == 1) rec = l;
    }
    sum_edge += edge;
    sum_edge2 += edge * edge;
    sum_rec += rec;
    sum_rec2 += rec * rec;
  }
  const double n = static_cast<double>(n_samples);
  auto se = [n](double sum, double sum2) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };
  VlbEstimate out;
  out.samples = n_samples;
  out.edge_term = sum_edge / n;
  out.edge_se = se(sum_edge, sum_edge2);
  out.rec_term = sum_rec / n;
  out.rec_se = se(sum_rec, sum_rec2);
  return out;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_log(const std::filesystem::path& path, const char* header, bool append) {
  const bool exists = append && std::filesystem::exists(path);
  std::ofstream out(path, exists ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (!exists) out << header << '\n';
  return out;
}

}  // namespace

TrainingResult run_training(const GraphDataset& ds, const TrainConfig& cfg_in, const NoiseSchedule& s,
                            const std::filesystem::path& out_dir,
                            const std::optional<Checkpoint>& resume) {
  if (ds.graphs.empty()) throw std::invalid_argument("run_training: empty dataset");
  TrainConfig cfg = cfg_in;
  cfg.arch.steps = s.steps();
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  const DegreePrior prior = fit_degree_prior(ds);
  std::vector<DegreeVector> degrees;
  for (const Graph& g : ds.graphs) degrees.push_back(degree(g));

  const SeededRng root(cfg.seed);
  OptimizerState opt;
  std::int64_t global_step = 0;
  int start_epoch = 0;
  if (resume && resume->state) {
    if (resume->params.arch.steps != s.steps()) {
      throw std::invalid_argument("run_training: checkpoint was trained with a different T");
    }
    opt.params = resume->params;
    opt.velocity = resume->state->momentum;
    global_step = resume->state->step;
    start_epoch = resume->state->epoch;
  } else {
    SeededRng init = root.child(std::numeric_limits<std::uint64_t>::max());
    opt.params = ModelParams::initialize(cfg.arch, init);
    opt.velocity = ModelParams::zeros(cfg.arch);
  }

  const bool append = resume.has_value();
  std::ofstream step_log =
      open_log(out_dir / "train_log.csv", "epoch,step,t,edge_term,node_term,rec_term,skipped", append);
  std::ofstream epoch_log = open_log(out_dir / "epoch_log.csv",
                                     "epoch,mean_edge_term,mean_node_term,mean_rec_term,steps,skipped", append);

  auto snapshot = [&](int epochs_done) {
    Checkpoint ck;
    ck.params = opt.params;
    ck.prior = prior;
    ck.state = TrainingState{global_step, epochs_done, opt.velocity};
    return ck;
  };

  TrainingResult result;
  for (int epoch = start_epoch; epoch < cfg.epochs; ++epoch) {
    EpochSummary summary;
    summary.epoch = epoch + 1;
    for (int k = 0; k < cfg.steps_per_epoch; ++k, ++global_step) {
      const std::size_t gi = static_cast<std::size_t>(global_step) % ds.graphs.size();
      SeededRng rng = root.child(static_cast<std::uint64_t>(global_step));
      const LossBreakdown b = train_step(ds.graphs[gi], degrees[gi], s, opt, cfg, rng);
      step_log << summary.epoch << ',' << global_step << ',' << b.t << ',' << fmt(b.edge_term) << ','
               << fmt(b.node_term) << ',' << fmt(b.rec_term) << ',' << (b.skipped ? 1 : 0) << '\n';
      ++summary.steps;
      if (b.skipped) {
        ++summary.skipped;
      } else {
        summary.mean_edge_term += b.edge_term;
        summary.mean_node_term += b.node_term;
        summary.mean_rec_term += b.rec_term;
      }
      result.steps.push_back(b);
    }
    const int used = summary.steps - summary.skipped;
    if (used > 0) {
      summary.mean_edge_term /= used;
      summary.mean_node_term /= used;
      summary.mean_rec_term /= used;
    }
    epoch_log << summary.epoch << ',' << fmt(summary.mean_edge_term) << ',' << fmt(summary.mean_node_term)
              << ',' << fmt(summary.mean_rec_term) << ',' << summary.steps << ',' << summary.skipped << '\n';
    result.epochs.push_back(summary);
    if (2 * summary.skipped >= summary.steps) {
      step_log.flush();
      epoch_log.flush();
      throw std::runtime_error("training diverged: " + std::to_string(summary.skipped) + " of " +
                               std::to_string(summary.steps) + " steps skipped in epoch " +
                               std::to_string(summary.epoch) + " (non-finite loss or gradient)");
    }
    if (cfg.checkpoint_every > 0 && summary.epoch % cfg.checkpoint_every == 0) {
      save_checkpoint(out_dir / ("checkpoint_epoch" + std::to_string(summary.epoch) + ".ckpt"),
                      snapshot(summary.epoch));
    }
  }
  result.final_checkpoint = out_dir / "model.ckpt";
  save_checkpoint(result.final_checkpoint, snapshot(std::max(cfg.epochs, start_epoch)));
  return result;
}

}  // namespace edgediffuse
