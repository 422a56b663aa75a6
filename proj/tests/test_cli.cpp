// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI inside `dir`, capturing stdout and stderr together.
Run cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" EDGE_DIFFUSE_CLI "' " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("edgediffuse_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const std::string kToy = std::string(EDGE_DIFFUSE_DATA_DIR) + "/toy_community.el";

}  // namespace

TEST_CASE("missing required flags exit with status 2") {
  const fs::path d = fresh_dir("missing");
  const Run r = cli(d, "train --out x");
  CHECK(r.code == 2);
  CHECK(r.out.find("--data") != std::string::npos);
  CHECK(cli(d, "frobnicate").code == 2);
  CHECK(cli(d, "train --data nope.el --out x").code == 1);
}

TEST_CASE("inspect-schedule prints the linear schedule") {
  const fs::path d = fresh_dir("sched");
  const Run r = cli(d, "inspect-schedule --T 4 --edges 8");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "t,beta,alpha_bar,gamma,expected_edges");
  bool saw_t3 = false;
  while (std::getline(lines, line)) {
    if (line.rfind("3,", 0) == 0) {
      saw_t3 = true;
      // beta_3 = 1/2, alpha_bar_3 = 1/4, gamma_3 = 1/3, 8 * 1/4 = 2 edges.
      CHECK(line.find(",0.5,0.25,0.33333333333333331,2") != std::string::npos);
    }
  }
  CHECK(saw_t3);
  CHECK(fs::exists(d / "manifest.json"));
  CHECK(fs::exists(d / "schedule.csv"));
}

TEST_CASE("config files apply and command-line flags win") {
  const fs::path d = fresh_dir("config");
  std::ofstream(d / "run.cfg") << "# schedule\nT = 5\nedges = 10\n";
  const Run from_file = cli(d, "inspect-schedule --config run.cfg");
  REQUIRE(from_file.code == 0);
  CHECK(std::count(from_file.out.begin(), from_file.out.end(), '\n') == 6);
  const Run overridden = cli(d, "inspect-schedule --config run.cfg --T 3");
  REQUIRE(overridden.code == 0);
  CHECK(std::count(overridden.out.begin(), overridden.out.end(), '\n') == 4);
  std::ofstream(d / "bad.cfg") << "this line has no equals sign\n";
  CHECK(cli(d, "inspect-schedule --config bad.cfg").code == 2);
  const auto manifest = nlohmann::json::parse(slurp(d / "manifest.json"));
  CHECK(manifest["subcommand"] == "inspect-schedule");
}

TEST_CASE("training twice with one seed gives identical logs") {
  const fs::path d = fresh_dir("train");
  const std::string common = "train --data '" + kToy + "' --T 64 --epochs 10 --seed 7 --out ";
  REQUIRE(cli(d, common + "a").code == 0);
  REQUIRE(cli(d, common + "b").code == 0);
  CHECK(slurp(d / "a" / "train_log.csv") == slurp(d / "b" / "train_log.csv"));
  CHECK(slurp(d / "a" / "epoch_log.csv") == slurp(d / "b" / "epoch_log.csv"));
  const auto manifest = nlohmann::json::parse(slurp(d / "a" / "manifest.json"));
  CHECK(manifest["seed"] == 7);
  CHECK(manifest["inputs"].size() >= 1);
  CHECK(manifest["inputs"][0]["sha256"].get<std::string>().size() == 64);

  SUBCASE("generation and evaluation on the trained model") {
    REQUIRE(cli(d, "generate --checkpoint a/model.ckpt --out gen --count 4 --seed 3 --trace").code == 0);
    CHECK(fs::exists(d / "gen" / "sample_0000.el"));
    CHECK(fs::exists(d / "gen" / "sample_0003.trace.csv"));
    CHECK(fs::exists(d / "gen" / "summary.csv"));
    REQUIRE(cli(d, "generate --checkpoint a/model.ckpt --out gen2 --count 4 --seed 3").code == 0);
    CHECK(slurp(d / "gen" / "sample_0002.el") == slurp(d / "gen2" / "sample_0002.el"));
    const Run e = cli(d, "eval --samples gen --reference '" + kToy + "' --mmd --out ev");
    REQUIRE(e.code == 0);
    const auto report = nlohmann::json::parse(slurp(d / "ev" / "eval.json"));
    CHECK(report["reports"].size() == 4);
    CHECK(report["mmd"].size() == 2);
  }
}

TEST_CASE("evaluating a set against itself gives zero MMD") {
  const fs::path d = fresh_dir("eval_same");
  fs::create_directories(d / "s");
  fs::copy_file(kToy, d / "s" / "toy.el");
  const Run r = cli(d, "eval --samples s --reference s/toy.el --mmd");
  REQUIRE(r.code == 0);
  const auto report = nlohmann::json::parse(slurp(d / "eval.json"));
  for (const auto& m : report["mmd"]) CHECK(std::abs(m["value"].get<double>()) <= 1e-12);
  CHECK(report["aggregate"]["eo"].get<double>() == 1.0);
}

TEST_CASE("profile reports the forward process") {
  const fs::path d = fresh_dir("profile");
  const Run r = cli(d, "profile --data '" + kToy + "' --T 16 --trajectories 4 --seed 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("t,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 17);
  CHECK(fs::exists(d / "profile.csv"));
  CHECK(fs::exists(d / "manifest.json"));
}
