// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edgediffuse/checkpoint.hpp"
#include "edgediffuse/generator.hpp"
#include "edgediffuse/graph.hpp"
#include "edgediffuse/parallel.hpp"
#include "edgediffuse/schedule.hpp"
#include "edgediffuse/stats.hpp"
#include "edgediffuse/trainer.hpp"
#include "json.hpp"
#include "manifest.hpp"

namespace edgediffuse::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

/// Bad flag values or config contents; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Common {
  int threads = 0;
  std::string config_file;
  std::vector<std::string> argv;
};

struct TrainOptions {
  std::string data;
  std::string out;
  int T = 64;
  int epochs = 20;
  int steps_per_epoch = 100;
  double lr = 1e-3;
  double momentum = 0.9;
  double clip = 5.0;
  int neg_cap = 20;
  std::uint64_t seed = 0;
  int checkpoint_every = 0;
  int layers = 2;
  int hidden = 16;
  int degree_clamp = 64;
  std::string resume;
  bool train_selection = false;
  bool compact_ids = false;
};

struct GenerateOptions {
  std::string checkpoint;
  std::string out;
  int count = 16;
  std::uint64_t seed = 0;
  bool trace = false;
  std::string mode = "degree-guided";
  int max_active = 0;
};

struct EvalOptions {
  std::string samples;
  std::string reference;
  std::string out = ".";
  bool mmd = false;
};

struct ProfileOptions {
  std::string data;
  std::string out = ".";
  int T = 64;
  int trajectories = 8;
  std::uint64_t seed = 0;
  bool compact_ids = false;
};

struct ScheduleOptions {
  int T = 0;
  double edges = 0.0;
  std::string out = ".";
};

void add_input_checked(Manifest& m, const std::string& path) {
  if (!path.empty()) m.add_input(path);
}

std::string write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  return path.string();
}

// --- train ------------------------------------------------------------------

int cmd_train(const TrainOptions& o, const Common& c) {
  TrainConfig cfg;
  cfg.epochs = o.epochs;
  cfg.steps_per_epoch = o.steps_per_epoch;
  cfg.learning_rate = o.lr;
  cfg.momentum = o.momentum;
  cfg.clip_norm = o.clip;
  cfg.negative_cap_factor = o.neg_cap;
  cfg.seed = o.seed;
  cfg.checkpoint_every = o.checkpoint_every;
  cfg.arch.layers = o.layers;
  cfg.arch.hidden = o.hidden;
  cfg.arch.degree_clamp = o.degree_clamp;
  cfg.arch.steps = o.T;
  cfg.train_selection = o.train_selection;
  try {
    cfg.validate();
    if (o.T < 1) throw std::invalid_argument("--T must be positive");
    if (o.layers < 0 || o.hidden < 2 || o.hidden % 2 != 0 || o.degree_clamp < 1) {
      throw std::invalid_argument("--hidden must be even and >= 2, --layers >= 0, --degree-clamp >= 1");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const GraphDataset ds = load_dataset(o.data, LoadOptions{o.compact_ids});
  const NoiseSchedule s = NoiseSchedule::linear(o.T);
  std::optional<Checkpoint> resume;
  if (!o.resume.empty()) resume = load_checkpoint(o.resume);

  const TrainingResult r = run_training(ds, cfg, s, o.out, resume);

  Manifest m("train", c.argv);
  m.set_seed(o.seed);
  m.set_config({{"data", o.data},          {"out", o.out},
                {"T", o.T},                {"epochs", o.epochs},
                {"steps_per_epoch", o.steps_per_epoch},
                {"lr", o.lr},              {"momentum", o.momentum},
                {"clip", o.clip},          {"neg_cap", o.neg_cap},
                {"seed", o.seed},          {"checkpoint_every", o.checkpoint_every},
                {"layers", o.layers},      {"hidden", o.hidden},
                {"degree_clamp", o.degree_clamp},
                {"resume", o.resume},      {"train_selection", o.train_selection},
                {"compact_ids", o.compact_ids},
                {"threads", c.threads}});
  m.add_input(o.data);
  add_input_checked(m, o.resume);
  add_input_checked(m, c.config_file);
  m.add_output(r.final_checkpoint);
  m.add_output(fs::path(o.out) / "train_log.csv");
  m.add_output(fs::path(o.out) / "epoch_log.csv");
  m.write(fs::path(o.out) / "manifest.json");

  if (!r.epochs.empty()) {
    const EpochSummary& last = r.epochs.back();
    std::cout << "epoch " << last.epoch << " mean_edge_term " << fmt(last.mean_edge_term) << " skipped "
              << last.skipped << '\n';
  }
  std::cout << "checkpoint " << r.final_checkpoint.string() << '\n';
  return 0;
}

// --- generate ---------------------------------------------------------------

int cmd_generate(const GenerateOptions& o, const Common& c) {
  if (o.count < 0) throw ConfigError("--count must be >= 0");
  if (o.max_active < 0) throw ConfigError("--max-active must be >= 0");
  const GenerationMode mode =
      o.mode == "learned" ? GenerationMode::learned_selection : GenerationMode::degree_guided;

  const Checkpoint ckpt = load_checkpoint(o.checkpoint);
  if (!ckpt.prior) throw std::runtime_error("checkpoint has no degree prior");
  const NoiseSchedule s = NoiseSchedule::linear(ckpt.params.arch.steps);
  GenerationOptions gopt;
  gopt.max_active = o.max_active;
  const GenerationBatch batch = generate_batch(ckpt.params, *ckpt.prior, s, static_cast<std::size_t>(o.count),
                                               SeededRng(o.seed), mode, gopt, c.threads);

  fs::create_directories(o.out);
  Manifest m("generate", c.argv);
  std::ostringstream summary;
  summary << "sample,nodes,edges,target_hits,seconds,message_ops,predicted_pairs\n";
  for (std::size_t i = 0; i < batch.traces.size(); ++i) {
    char stem[32];
    std::snprintf(stem, sizeof stem, "sample_%04zu", i);
    const GenerationTrace& tr = batch.traces[i];
    const fs::path el = fs::path(o.out) / (std::string(stem) + ".el");
    save_edge_list(el, tr.final_graph);
    m.add_output(el);

    std::size_t ops = 0;
    std::size_t pairs = 0;
    for (const StepRecord& r : tr.steps) {
      ops += r.message_ops;
      pairs += r.predicted_pairs;
    }
    int hits = 0;
    for (std::size_t v = 0; v < tr.target_degrees.size(); ++v) {
      hits += tr.final_graph.degree(static_cast<int>(v)) == tr.target_degrees[v] ? 1 : 0;
    }
    summary << stem << ',' << tr.final_graph.num_nodes() << ',' << tr.final_graph.num_edges() << ','
            << (tr.target_degrees.empty() ? std::string("") : std::to_string(hits)) << ','
            << fmt(tr.seconds) << ',' << ops << ',' << pairs << '\n';

    if (o.trace) {
      std::ostringstream csv;
      csv << "t,active,input_edges,edges_added,cumulative_edges,predicted_pairs,message_ops\n";
      for (const StepRecord& r : tr.steps) {
        csv << r.t << ',' << r.active << ',' << r.input_edges << ',' << r.edges_added << ','
            << r.cumulative_edges << ',' << r.predicted_pairs << ',' << r.message_ops << '\n';
      }
      m.add_output(write_text(fs::path(o.out) / (std::string(stem) + ".trace.csv"), csv.str()));
    }
  }
  m.add_output(write_text(fs::path(o.out) / "summary.csv", summary.str()));
  m.set_seed(o.seed);
  m.set_config({{"checkpoint", o.checkpoint},
                {"out", o.out},
                {"count", o.count},
                {"seed", o.seed},
                {"trace", o.trace},
                {"mode", o.mode},
                {"max_active", o.max_active},
                {"threads", c.threads}});
  m.add_input(o.checkpoint);
  add_input_checked(m, c.config_file);
  m.write(fs::path(o.out) / "manifest.json");
  std::cout << "generated " << batch.traces.size() << " graphs in " << o.out << '\n';
  return 0;
}

// --- eval -------------------------------------------------------------------

json report_json(const StatsReport& r) {
  auto metric = [](double v, bool ok) { return ok ? json(v) : json(nullptr); };
  return {{"ple", metric(r.ple, r.ple_valid)},
          {"ntc", metric(r.ntc, r.ntc_valid)},
          {"cc", metric(r.cc, r.cc_valid)},
          {"cpl", metric(r.cpl, r.cpl_valid)},
          {"ac", metric(r.ac, r.ac_valid)},
          {"eo", metric(r.eo, r.eo_valid)},
          {"triangles", r.triangles},
          {"cpl_convention", "connected_pairs"},
          {"disconnected", r.disconnected}};
}

int cmd_eval(const EvalOptions& o, const Common& c) {
  std::vector<fs::path> files;
  if (!fs::is_directory(o.samples)) throw std::runtime_error("samples directory not found: " + o.samples);
  for (const auto& entry : fs::directory_iterator(o.samples)) {
    if (entry.is_regular_file() && entry.path().extension() == ".el") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .el samples in " + o.samples);

  const GraphDataset reference = load_dataset(o.reference);
  if (reference.graphs.empty()) throw std::runtime_error("empty reference dataset");
  GraphDataset samples{"samples", {}};
  for (const auto& f : files) samples.graphs.push_back(load_edge_list(f));

  const Graph& ref = reference.graphs.front();
  json reports = json::array();
  const char* keys[] = {"ple", "ntc", "cc", "cpl", "ac", "eo"};
  json sums = json::object();
  json counts = json::object();
  for (const char* k : keys) {
    sums[k] = 0.0;
    counts[k] = 0;
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    json rj = report_json(graph_stats(samples.graphs[i], &ref));
    for (const char* k : keys) {
      if (!rj[k].is_null()) {
        sums[k] = sums[k].get<double>() + rj[k].get<double>();
        counts[k] = counts[k].get<int>() + 1;
      }
    }
    json row = {{"sample", files[i].filename().string()},
                {"nodes", samples.graphs[i].num_nodes()},
                {"edges", samples.graphs[i].num_edges()}};
    row.update(rj);
    reports.push_back(row);
  }
  json aggregate = {{"samples", files.size()}};
  for (const char* k : keys) {
    const int n = counts[k].get<int>();
    aggregate[k] = n > 0 ? json(sums[k].get<double>() / n) : json(nullptr);
    aggregate[std::string(k) + "_count"] = n;
  }
  json out = {{"reference", report_json(graph_stats(ref, &ref))}, {"reports", reports}, {"aggregate", aggregate}};
  if (o.mmd) {
    json mmd = json::array();
    for (HistogramKind kind : {HistogramKind::degree, HistogramKind::clustering}) {
      const MmdResult r = mmd_histograms(samples, reference, kind);
      mmd.push_back({{"kind", to_string(kind)}, {"value", r.value}, {"bandwidth", r.bandwidth}, {"clamped", r.clamped}});
    }
    out["mmd"] = mmd;
  }

  fs::create_directories(o.out);
  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  Manifest m("eval", c.argv);
  m.set_config({{"samples", o.samples}, {"reference", o.reference}, {"out", o.out}, {"mmd", o.mmd}});
  m.add_input(o.reference);
  for (const auto& f : files) m.add_input(f);
  add_input_checked(m, c.config_file);
  m.add_output(write_text(fs::path(o.out) / "eval.json", text));
  m.write(fs::path(o.out) / "manifest.json");
  return 0;
}

// --- profile ----------------------------------------------------------------

int cmd_profile(const ProfileOptions& o, const Common& c) {
  if (o.T < 1) throw ConfigError("--T must be positive");
  if (o.trajectories < 1) throw ConfigError("--trajectories must be positive");
  const Graph g = load_edge_list(o.data, LoadOptions{o.compact_ids});
  const NoiseSchedule s = NoiseSchedule::linear(o.T);
  SeededRng rng(o.seed);
  const std::vector<ProfileRow> rows = active_profile(g, s, o.trajectories, rng);
  std::ostringstream csv;
  csv << "t,mean_active,se_active,expected_active,mean_edges,se_edges,expected_edges\n";
  for (const ProfileRow& r : rows) {
    csv << r.t << ',' << fmt(r.mean_active) << ',' << fmt(r.se_active) << ',' << fmt(r.expected_active) << ','
        << fmt(r.mean_edges) << ',' << fmt(r.se_edges) << ',' << fmt(r.expected_edges) << '\n';
  }
  std::cout << csv.str();
  fs::create_directories(o.out);
  Manifest m("profile", c.argv);
  m.set_seed(o.seed);
  m.set_config({{"data", o.data}, {"out", o.out}, {"T", o.T}, {"trajectories", o.trajectories},
                {"seed", o.seed}, {"compact_ids", o.compact_ids}});
  m.add_input(o.data);
  add_input_checked(m, c.config_file);
  m.add_output(write_text(fs::path(o.out) / "profile.csv", csv.str()));
  m.write(fs::path(o.out) / "manifest.json");
  return 0;
}

// --- inspect-schedule -------------------------------------------------------

int cmd_inspect_schedule(const ScheduleOptions& o, const Common& c) {
  if (o.T < 1) throw ConfigError("--T must be positive");
  if (o.edges < 0) throw ConfigError("--edges must be >= 0");
  const NoiseSchedule s = NoiseSchedule::linear(o.T);
  std::ostringstream csv;
  csv << "t,beta,alpha_bar,gamma,expected_edges\n";
  for (int t = 1; t <= o.T; ++t) {
    csv << t << ',' << fmt(s.beta(t)) << ',' << fmt(s.alpha_bar(t)) << ',' << fmt(gamma(s, t)) << ','
        << fmt(o.edges * s.alpha_bar(t)) << '\n';
  }
  std::cout << csv.str();
  fs::create_directories(o.out);
  Manifest m("inspect-schedule", c.argv);
  m.set_config({{"T", o.T}, {"edges", o.edges}, {"out", o.out}});
  add_input_checked(m, c.config_file);
  m.add_output(write_text(fs::path(o.out) / "schedule.csv", csv.str()));
  m.write(fs::path(o.out) / "manifest.json");
  return 0;
}

// --- config files -----------------------------------------------------------

/// Reads `key = value` lines ('#' starts a comment) into flag tokens.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read --config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    tokens.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return tokens;
}

}  // namespace

int run(int argc, char** argv) {
  Common common;
  std::vector<std::string> args(argv + 1, argv + argc);
  common.argv = args;

  // Config values are spliced in right after the subcommand so that flags
  // given on the command line, which come later, take precedence.
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t width = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      width = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      width = 1;
    }
    if (width == 0) continue;
    common.config_file = path;
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + width));
    try {
      const std::vector<std::string> extra = config_tokens(path);
      static const char* kSubcommands[] = {"train", "generate", "eval", "profile", "inspect-schedule"};
      std::size_t at = 0;
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (std::find(std::begin(kSubcommands), std::end(kSubcommands), args[j]) != std::end(kSubcommands)) {
          at = j + 1;
          break;
        }
      }
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
    } catch (const ConfigError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
    break;
  }

  CLI::App app{"edge-diffuse: sparse graph generation by degree-guided edge-removal diffusion"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--threads", common.threads, "worker threads (default: EDGE_DIFFUSE_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--config", common.config_file, "key = value file; command-line flags override it");

  TrainOptions to;
  CLI::App* train = app.add_subcommand("train", "train the edge-prediction model");
  train->add_option("--data", to.data, "edge list or multi-graph dataset")->required();
  train->add_option("--out", to.out, "output directory")->required();
  train->add_option("--T", to.T, "diffusion steps")->capture_default_str();
  train->add_option("--epochs", to.epochs)->capture_default_str();
  train->add_option("--steps-per-epoch", to.steps_per_epoch)->capture_default_str();
  train->add_option("--lr", to.lr)->capture_default_str();
  train->add_option("--momentum", to.momentum)->capture_default_str();
  train->add_option("--clip", to.clip, "gradient max-norm")->capture_default_str();
  train->add_option("--neg-cap", to.neg_cap, "negatives per active node before subsampling")->capture_default_str();
  train->add_option("--seed", to.seed)->capture_default_str();
  train->add_option("--checkpoint-every", to.checkpoint_every, "epochs between checkpoints, 0 = final only")
      ->capture_default_str();
  train->add_option("--layers", to.layers)->capture_default_str();
  train->add_option("--hidden", to.hidden)->capture_default_str();
  train->add_option("--degree-clamp", to.degree_clamp)->capture_default_str();
  train->add_option("--resume", to.resume, "checkpoint with training state to continue from");
  train->add_flag("--train-selection", to.train_selection, "also fit the node-selection head");
  train->add_flag("--compact-ids", to.compact_ids, "relabel sparse node ids to 0..n-1");

  GenerateOptions go;
  CLI::App* generate = app.add_subcommand("generate", "sample graphs from a checkpoint");
  generate->add_option("--checkpoint", go.checkpoint)->required();
  generate->add_option("--out", go.out, "output directory")->required();
  generate->add_option("--count", go.count)->capture_default_str();
  generate->add_option("--seed", go.seed)->capture_default_str();
  generate->add_flag("--trace", go.trace, "write per-step CSV traces");
  generate->add_option("--mode", go.mode)
      ->check(CLI::IsMember({"degree-guided", "learned"}))
      ->capture_default_str();
  generate->add_option("--max-active", go.max_active, "cap on active nodes per step, 0 = off")
      ->capture_default_str();

  EvalOptions eo;
  CLI::App* eval = app.add_subcommand("eval", "graph statistics of generated samples");
  eval->add_option("--samples", eo.samples, "directory of .el files")->required();
  eval->add_option("--reference", eo.reference, "training or test graph(s)")->required();
  eval->add_option("--out", eo.out)->capture_default_str();
  eval->add_flag("--mmd", eo.mmd, "add degree and clustering MMD");

  ProfileOptions po;
  CLI::App* profile = app.add_subcommand("profile", "active-node profile of the forward process");
  profile->add_option("--data", po.data)->required();
  profile->add_option("--T", po.T)->capture_default_str();
  profile->add_option("--trajectories", po.trajectories)->capture_default_str();
  profile->add_option("--seed", po.seed)->capture_default_str();
  profile->add_option("--out", po.out)->capture_default_str();
  profile->add_flag("--compact-ids", po.compact_ids);

  ScheduleOptions so;
  CLI::App* inspect = app.add_subcommand("inspect-schedule", "print the linear noise schedule");
  inspect->add_option("--T", so.T)->required();
  inspect->add_option("--edges", so.edges, "initial edge count for the expected_edges column")
      ->capture_default_str();
  inspect->add_option("--out", so.out)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (train->parsed()) return cmd_train(to, common);
    if (generate->parsed()) return cmd_generate(go, common);
    if (eval->parsed()) return cmd_eval(eo, common);
    if (profile->parsed()) return cmd_profile(po, common);
    if (inspect->parsed()) return cmd_inspect_schedule(so, common);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const GraphFormatError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace edgediffuse::cli
