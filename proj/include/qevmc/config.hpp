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

#ifndef QEVMC_CONFIG_HPP
#define QEVMC_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qevmc/lattice.hpp"
#include "qevmc/mcmc.hpp"
#include "qevmc/sector_basis.hpp"
#include "qevmc/sr.hpp"

namespace qevmc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Flat experiment description. The on-disk format is line-oriented
 * `key = value` under `[section]` headers; `#` starts a comment. Unknown
 * sections or keys are rejected. serialize() emits every resolved value, so
 * a manifest written from a partial config parses back to the same config.
 */
struct ExperimentConfig {
  // [model]
  std::string model = "hubbard";      // hubbard | tfi
  int rows = 1;
  int cols = 4;
  std::string boundary = "open";      // open | periodic
  double U = 4.0;
  double J = 1.0;
  double h = 1.0;
  int n_up = -1;                      // -1: half filling
  int n_down = -1;

  // [wavefunction]
  double gutzwiller_c = 0.421;
  int alpha = 1;                      // hidden-unit density M = alpha N
  double init_stddev = 0.01;
  std::string weights_in;             // optional NQS weight file

  // [vqe]
  int vqe_layers = 2;
  int vqe_restarts = 10;
  std::uint64_t vqe_samples = 5000;

  // [chain]
  std::uint64_t n_chains = 1000;
  std::uint64_t chain_length = 100;
  std::uint64_t burn_in = 0;
  std::uint64_t thinning = 1;

  // [sr]
  int sr_iterations = 200;
  std::uint64_t sr_samples = 5000;
  std::uint64_t sr_chain_length = 15;
  double sr_eta = 0.05;
  double sr_lambda0 = 100.0;
  double sr_lambda_decay = 0.9;
  double sr_lambda_min = 1e-4;

  // [analysis]
  std::uint64_t analysis_steps = 200;
  std::string tvd_targets = "0.3,0.2,0.1,0.05,0.02,0.01";

  // [output]
  std::string output_dir = "out";

  // [seed]
  std::uint64_t master_seed = 1;

  std::vector<std::string> warnings;  // non-fatal notes from parsing

  LatticeSpec lattice() const {
    LatticeSpec lat;
    lat.rows = rows;
    lat.cols = cols;
    lat.model = model == "tfi" ? Model::kTfi : Model::kHubbard;
    lat.boundary = boundary == "periodic" ? Boundary::kPeriodic : Boundary::kOpen;
    return lat;
  }

  HamiltonianSpec hamiltonian() const {
    HamiltonianSpec spec;
    spec.lattice = lattice();
    spec.U = U;
    spec.J = J;
    spec.h = h;
    return spec;
  }

  SectorConstraint constraint() const {
    if (model == "tfi") return SectorConstraint::all_spins();
    const int L = rows * cols;
    int up = n_up >= 0 ? n_up : L / 2;
    int down = n_down >= 0 ? n_down : L - L / 2;
    return SectorConstraint::fixed_fill(up, down);
  }

  ChainConfig chain() const {
    ChainConfig cc;
    cc.n_chains = n_chains;
    cc.chain_length = chain_length;
    cc.burn_in = burn_in;
    cc.thinning = thinning;
    cc.seed = component_seed(master_seed, kSeedChains);
    return cc;
  }

  SrConfig sr() const {
    SrConfig sc;
    sc.iterations = sr_iterations;
    sc.samples = sr_samples;
    sc.chain_length = sr_chain_length;
    sc.eta = sr_eta;
    sc.lambda0 = sr_lambda0;
    sc.lambda_decay = sr_lambda_decay;
    sc.lambda_min = sr_lambda_min;
    sc.seed = component_seed(master_seed, kSeedSr);
    return sc;
  }

  std::vector<double> parsed_tvd_targets() const {
    std::vector<double> out;
    std::stringstream ss(tvd_targets);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
  }

  /// Documented counter scheme: component c draws the c-th splitmix64 output
  /// of a stream seeded with the master seed.
  static constexpr int kSeedVqe = 0;
  static constexpr int kSeedVqeSampling = 1;
  static constexpr int kSeedChains = 2;
  static constexpr int kSeedSr = 3;
  static constexpr int kSeedAnalysis = 4;
  static constexpr int kSeedMixing = 5;
  static std::uint64_t component_seed(std::uint64_t master, int counter) {
    std::uint64_t s = master;
    std::uint64_t v = 0;
    for (int i = 0; i <= counter; ++i) v = splitmix64(s);
    return v;
  }

  void validate() const {
    if (model != "hubbard" && model != "tfi")
      throw ConfigError("model: must be 'hubbard' or 'tfi'");
    if (boundary != "open" && boundary != "periodic")
      throw ConfigError("boundary: must be 'open' or 'periodic'");
    if (rows < 1 || cols < 1) throw ConfigError("rows/cols: must be >= 1");
    if (alpha < 1) throw ConfigError("alpha: must be >= 1");
    if (vqe_layers < 0) throw ConfigError("vqe_layers: must be >= 0");
    if (thinning < 1) throw ConfigError("thinning: must be >= 1");
    if (sr_eta <= 0) throw ConfigError("sr_eta: must be > 0");
  }
};

namespace detail {

inline std::string trim(const std::string &s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::string serialize(const ExperimentConfig &c) {
  std::ostringstream o;
  o << "[model]\n"
    << "model = " << c.model << "\n"
    << "rows = " << c.rows << "\n"
    << "cols = " << c.cols << "\n"
    << "boundary = " << c.boundary << "\n"
    << "U = " << c.U << "\n"
    << "J = " << c.J << "\n"
    << "h = " << c.h << "\n"
    << "n_up = " << c.n_up << "\n"
    << "n_down = " << c.n_down << "\n"
    << "\n[wavefunction]\n"
    << "gutzwiller_c = " << c.gutzwiller_c << "\n"
    << "alpha = " << c.alpha << "\n"
    << "init_stddev = " << c.init_stddev << "\n"
    << "weights_in = " << c.weights_in << "\n"
    << "\n[vqe]\n"
    << "layers = " << c.vqe_layers << "\n"
    << "restarts = " << c.vqe_restarts << "\n"
    << "samples = " << c.vqe_samples << "\n"
    << "\n[chain]\n"
    << "n_chains = " << c.n_chains << "\n"
    << "chain_length = " << c.chain_length << "\n"
    << "burn_in = " << c.burn_in << "\n"
    << "thinning = " << c.thinning << "\n"
    << "\n[sr]\n"
    << "iterations = " << c.sr_iterations << "\n"
    << "samples = " << c.sr_samples << "\n"
    << "chain_length = " << c.sr_chain_length << "\n"
    << "eta = " << c.sr_eta << "\n"
    << "lambda0 = " << c.sr_lambda0 << "\n"
    << "lambda_decay = " << c.sr_lambda_decay << "\n"
    << "lambda_min = " << c.sr_lambda_min << "\n"
    << "\n[analysis]\n"
    << "steps = " << c.analysis_steps << "\n"
    << "tvd_targets = " << c.tvd_targets << "\n"
    << "\n[output]\n"
    << "directory = " << c.output_dir << "\n"
    << "\n[seed]\n"
    << "master = " << c.master_seed << "\n";
  return o.str();
}

inline ExperimentConfig parse_config_text(const std::string &text,
                                          const std::string &origin = "config") {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "model" && section != "wavefunction" && section != "vqe" &&
          section != "chain" && section != "sr" && section != "analysis" &&
          section != "output" && section != "seed")
        fail("unknown section [" + section + "]");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));

    auto as_int = [&](int &dst) {
      try {
        dst = std::stoi(value);
      } catch (...) {
        fail(key + ": not an integer ('" + value + "')");
      }
    };
    auto as_u64 = [&](std::uint64_t &dst) {
      try {
        dst = std::stoull(value);
      } catch (...) {
        fail(key + ": not a non-negative integer ('" + value + "')");
      }
    };
    auto as_real = [&](double &dst) {
      try {
        dst = std::stod(value);
      } catch (...) {
        fail(key + ": not a number ('" + value + "')");
      }
    };

    bool handled = true;
    if (section == "model") {
      if (key == "model") c.model = value;
      else if (key == "rows") as_int(c.rows);
      else if (key == "cols") as_int(c.cols);
      else if (key == "boundary") c.boundary = value;
      else if (key == "U") as_real(c.U);
      else if (key == "J") as_real(c.J);
      else if (key == "h") as_real(c.h);
      else if (key == "n_up") as_int(c.n_up);
      else if (key == "n_down") as_int(c.n_down);
      else handled = false;
    } else if (section == "wavefunction") {
      if (key == "gutzwiller_c") as_real(c.gutzwiller_c);
      else if (key == "alpha") as_int(c.alpha);
      else if (key == "init_stddev") as_real(c.init_stddev);
      else if (key == "weights_in") c.weights_in = value;
      else handled = false;
    } else if (section == "vqe") {
      if (key == "layers") as_int(c.vqe_layers);
      else if (key == "restarts") as_int(c.vqe_restarts);
      else if (key == "samples") as_u64(c.vqe_samples);
      else handled = false;
    } else if (section == "chain") {
      if (key == "n_chains") as_u64(c.n_chains);
      else if (key == "chain_length") as_u64(c.chain_length);
      else if (key == "burn_in") as_u64(c.burn_in);
      else if (key == "thinning") as_u64(c.thinning);
      else handled = false;
    } else if (section == "sr") {
      if (key == "iterations") as_int(c.sr_iterations);
      else if (key == "samples") as_u64(c.sr_samples);
      else if (key == "chain_length") as_u64(c.sr_chain_length);
      else if (key == "eta") as_real(c.sr_eta);
      else if (key == "lambda0") as_real(c.sr_lambda0);
      else if (key == "lambda_decay") as_real(c.sr_lambda_decay);
      else if (key == "lambda_min") as_real(c.sr_lambda_min);
      else handled = false;
    } else if (section == "analysis") {
      if (key == "steps") as_u64(c.analysis_steps);
      else if (key == "tvd_targets") c.tvd_targets = value;
      else handled = false;
    } else if (section == "output") {
      if (key == "directory") c.output_dir = value;
      else handled = false;
    } else if (section == "seed") {
      if (key == "master") as_u64(c.master_seed);
      else handled = false;
    } else {
      fail("key outside any [section]");
    }
    if (!handled) fail("unknown key '" + key + "' in section [" + section + "]");
  }

  c.validate();
  // Attractive Hubbard is legal physics, just outside the studied regime.
  if (c.model == "hubbard" && c.U < 0)
    c.warnings.push_back("U < 0: attractive Hubbard model");
  return c;
}

inline ExperimentConfig parse_config(const std::string &path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

/// Full resolved-values manifest so a run is reconstructible from its output.
inline void write_manifest(const ExperimentConfig &c, const std::string &path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << serialize(c);
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace qevmc

#endif  // QEVMC_CONFIG_HPP
