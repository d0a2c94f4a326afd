// Copyright 2026 The QEVMC Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catch2/catch_amalgamated.hpp"
#include "qevmc/nqs.hpp"
#include "qevmc/samples.hpp"

using namespace qevmc;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  fs::path dir = fs::temp_directory_path() / "qevmc_cli_tests";
  fs::create_directories(dir);
  return dir;
}

/// Runs the CLI binary (path from the QEVMC_CLI environment variable) and
/// returns its exit status; stdout+stderr land in `log`.
int run_cli(const std::string &args, const fs::path &log) {
  const char *exe = std::getenv("QEVMC_CLI");
  REQUIRE(exe != nullptr);
  std::string cmd = std::string("\"") + exe + "\" " + args + " > \"" +
                    log.string() + "\" 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path &p, const std::string &text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("argument errors exit with the config code") {
  fs::path log = work_dir() / "log.txt";
  CHECK(run_cli("", log) == 2);                    // a subcommand is required
  CHECK(run_cli("frobnicate", log) == 2);          // unknown subcommand
  CHECK(run_cli("--help", log) == 0);
  CHECK_THAT(slurp(log), ContainsSubstring("Monte Carlo"));
  CHECK(run_cli("samples filter --in x.txt", log) == 2);  // missing required
  CHECK(run_cli("vmc run --source bogus", log) == 2);
  CHECK(run_cli("preset no-such-preset", log) == 2);
}

TEST_CASE("a malformed config file is a config error") {
  fs::path dir = work_dir();
  fs::path cfg = dir / "bad.cfg";
  write_file(cfg, "[model]\nbogus = 1\n");
  fs::path log = dir / "log.txt";
  CHECK(run_cli("vmc run --config \"" + cfg.string() + "\"", log) == 2);
  CHECK_THAT(slurp(log), ContainsSubstring("config error"));
  CHECK(run_cli("vqe --config /does/not/exist.cfg", log) == 2);
}

TEST_CASE("vqe writes samples, a report, and a manifest") {
  fs::path dir = work_dir() / "vqe_out";
  fs::remove_all(dir);
  fs::path log = work_dir() / "log.txt";
  fs::path cfg = work_dir() / "vqe.cfg";
  write_file(cfg,
             "[model]\nmodel = hubbard\ncols = 4\n"
             "[vqe]\nlayers = 1\nrestarts = 2\nsamples = 500\n");
  REQUIRE(run_cli("vqe --config \"" + cfg.string() + "\" --output \"" +
                      dir.string() + "\"",
                  log) == 0);
  CHECK_THAT(slurp(log), ContainsSubstring("variational energy"));
  CHECK(fs::exists(dir / "vqe.json"));
  CHECK(fs::exists(dir / "manifest.txt"));
  SampleStore store = load_samples((dir / "samples-vqe.txt").string());
  CHECK(store.source == "vqe-sim");
  CHECK(store.layers == 1);
  CHECK(store.samples.size() == 500);
  for (const auto &x : store.samples) {
    auto [up, down] = fill_of(x, 4);
    REQUIRE(up == 2);
    REQUIRE(down == 2);
  }
}

TEST_CASE("samples filter / concat / mix pipeline") {
  fs::path dir = work_dir();
  fs::path log = dir / "log.txt";

  // raw store with mixed sectors
  SampleStore raw;
  raw.model = Model::kHubbard;
  raw.rows = 1;
  raw.cols = 4;
  raw.constraint = SectorConstraint::all_spins();
  Rng rng(55);
  for (int i = 0; i < 2000; ++i) {
    BasisState x(8);
    for (int j = 0; j < 8; ++j)
      if (rng.next_u64() & 1u) x.set(j);
    raw.samples.push_back(x);
  }
  fs::path raw_path = dir / "raw.txt";
  save_samples(raw, raw_path.string());

  fs::path kept_path = dir / "kept.txt";
  REQUIRE(run_cli("samples filter --in \"" + raw_path.string() + "\" --out \"" +
                      kept_path.string() + "\" --n-up 2 --n-down 2",
                  log) == 0);
  CHECK_THAT(slurp(log), ContainsSubstring("retention"));
  SampleStore kept = load_samples(kept_path.string());
  CHECK(kept.constraint.n_up == 2);
  for (const auto &x : kept.samples) {
    auto [up, down] = fill_of(x, 4);
    REQUIRE(up == 2);
    REQUIRE(down == 2);
  }

  // an unreachable sector is a numerical failure, not a silent empty file
  CHECK(run_cli("samples filter --in \"" + raw_path.string() + "\" --out \"" +
                    (dir / "none.txt").string() + "\" --n-up 5 --n-down 0",
                log) == 3);

  fs::path big_path = dir / "big.txt";
  REQUIRE(run_cli("samples concat --in \"" + kept_path.string() +
                      "\" --out \"" + big_path.string() +
                      "\" --factor 2 --n 300 --seed 9",
                  log) == 0);
  SampleStore big = load_samples(big_path.string());
  CHECK(big.cols == 8);
  CHECK(big.samples.size() == 300);
  CHECK(big.constraint.n_up == 4);

  fs::path mixed_path = dir / "mixed.txt";
  REQUIRE(run_cli("samples mix --in \"" + kept_path.string() + "\" --out \"" +
                      mixed_path.string() + "\" --epsilon 0.2 --n 400 --seed 9",
                  log) == 0);
  SampleStore mixed = load_samples(mixed_path.string());
  CHECK(mixed.samples.size() == 400);
  CHECK(run_cli("samples mix --in \"" + kept_path.string() + "\" --out \"" +
                    mixed_path.string() + "\" --epsilon 1.5",
                log) == 2);
}

TEST_CASE("vmc run produces a trace and final samples") {
  fs::path dir = work_dir() / "vmc_out";
  fs::remove_all(dir);
  fs::path log = work_dir() / "log.txt";
  fs::path cfg = work_dir() / "vmc.cfg";
  write_file(cfg,
             "[model]\nmodel = hubbard\ncols = 4\n"
             "[wavefunction]\ngutzwiller_c = 0.865\n"
             "[chain]\nn_chains = 50\nchain_length = 10\n");
  REQUIRE(run_cli("vmc run --config \"" + cfg.string() + "\" --source slater" +
                      " --output \"" + dir.string() + "\"",
                  log) == 0);
  CHECK_THAT(slurp(log), ContainsSubstring("final energy"));
  CHECK_THAT(slurp(dir / "trace.csv"), ContainsSubstring("step"));
  SampleStore fin = load_samples((dir / "final-samples.txt").string());
  CHECK(fin.samples.size() == 50);
  CHECK(fin.source == "vmc");

  // reruns with the same seed are bit-identical
  fs::path dir2 = work_dir() / "vmc_out2";
  fs::remove_all(dir2);
  REQUIRE(run_cli("vmc run --config \"" + cfg.string() + "\" --source slater" +
                      " --output \"" + dir2.string() + "\"",
                  log) == 0);
  CHECK(slurp(dir / "trace.csv") == slurp(dir2 / "trace.csv"));
}

TEST_CASE("sr train writes weights and a per-iteration csv") {
  fs::path dir = work_dir() / "sr_out";
  fs::remove_all(dir);
  fs::path log = work_dir() / "log.txt";
  fs::path cfg = work_dir() / "sr.cfg";
  write_file(cfg,
             "[model]\nmodel = tfi\ncols = 4\n"
             "[sr]\niterations = 8\nsamples = 200\nchain_length = 5\n");
  REQUIRE(run_cli("sr train --config \"" + cfg.string() + "\" --output \"" +
                      dir.string() + "\"",
                  log) == 0);
  CHECK_THAT(slurp(log), ContainsSubstring("final energy"));
  CHECK_THAT(slurp(dir / "sr_train.csv"), ContainsSubstring("relative_error"));
  NqsWF wf = NqsWF::load((dir / "nqs.weights").string());
  CHECK(wf.n_visible() == 4);
  CHECK(wf.n_hidden() == 4);

  // sr train is defined for the spin model only
  fs::path hub = work_dir() / "sr_hub.cfg";
  write_file(hub, "[model]\nmodel = hubbard\ncols = 4\n");
  CHECK(run_cli("sr train --config \"" + hub.string() + "\"", log) == 2);
}

TEST_CASE("analyze runs the enumerable study end to end") {
  fs::path dir = work_dir() / "analyze_out";
  fs::remove_all(dir);
  fs::path log = work_dir() / "log.txt";
  fs::path cfg = work_dir() / "analyze.cfg";
  write_file(cfg,
             "[model]\nmodel = hubbard\ncols = 4\n"
             "[wavefunction]\ngutzwiller_c = 0.865\n"
             "[vqe]\nlayers = 1\nrestarts = 2\n"
             "[analysis]\nsteps = 30\n");
  REQUIRE(run_cli("analyze --config \"" + cfg.string() + "\" --output \"" +
                      dir.string() + "\"",
                  log) == 0);
  CHECK_THAT(slurp(log), ContainsSubstring("lambda2"));
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "manifest.txt"));

  // tfi analyze requires trained weights
  fs::path tfi = work_dir() / "analyze_tfi.cfg";
  write_file(tfi, "[model]\nmodel = tfi\ncols = 4\n");
  CHECK(run_cli("analyze --config \"" + tfi.string() + "\"", log) == 2);
}
