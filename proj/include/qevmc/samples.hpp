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

#ifndef QEVMC_SAMPLES_HPP
#define QEVMC_SAMPLES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qevmc/basis_state.hpp"
#include "qevmc/lattice.hpp"
#include "qevmc/rng.hpp"
#include "qevmc/sector_basis.hpp"

namespace qevmc {

/**
 * Persisted collection of measurement bitstrings plus provenance metadata;
 * the interchange object between the circuit-simulation stage and VMC.
 *
 * File format (bit-exact): UTF-8 text. Line 1 is `QEVMC-SAMPLES v1`,
 * followed by `key=value` metadata lines, a blank line, then one sample per
 * line as ASCII 0/1 with site 0 leftmost. Hubbard samples are written as
 * up-bits `|` down-bits.
 */
struct SampleStore {
  Model model = Model::kTfi;
  int rows = 1;
  int cols = 0;
  SectorConstraint constraint = SectorConstraint::all_spins();
  std::string source = "external";  // vqe-sim | external | uniform | slater
  std::uint64_t seed = 0;
  int layers = 0;
  std::vector<BasisState> samples;

  int sites() const { return rows * cols; }
  int width() const { return model == Model::kHubbard ? 2 * sites() : sites(); }

  void validate() const {
    for (const auto &s : samples)
      if (s.width() != width())
        throw std::runtime_error("sample width does not match metadata size");
  }
};

inline void save_samples(const SampleStore &store, const std::string &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "QEVMC-SAMPLES v1\n";
  f << "model=" << model_name(store.model) << "\n";
  f << "rows=" << store.rows << "\n";
  f << "cols=" << store.cols << "\n";
  if (store.constraint.kind == SectorConstraint::Kind::kFixedFill) {
    f << "n_up=" << store.constraint.n_up << "\n";
    f << "n_down=" << store.constraint.n_down << "\n";
  }
  f << "source=" << store.source << "\n";
  f << "seed=" << store.seed << "\n";
  f << "layers=" << store.layers << "\n";
  f << "\n";
  const int L = store.sites();
  for (const auto &x : store.samples) {
    std::string s = x.to_string();
    if (store.model == Model::kHubbard)
      f << s.substr(0, L) << '|' << s.substr(L) << '\n';
    else
      f << s << '\n';
  }
  if (!f) throw std::runtime_error("failed writing " + path);
}

inline SampleStore load_samples(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + msg);
  };
  if (!std::getline(f, line)) fail("empty file");
  ++lineno;
  if (line != "QEVMC-SAMPLES v1") fail("unknown version line '" + line + "'");

  std::map<std::string, std::string> meta;
  bool saw_blank = false;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) {
      saw_blank = true;
      break;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("malformed metadata line '" + line + "'");
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!saw_blank) fail("truncated file: missing blank line before samples");

  SampleStore store;
  auto require = [&](const std::string &key) {
    auto it = meta.find(key);
    if (it == meta.end()) fail("missing metadata key '" + key + "'");
    return it->second;
  };
  std::string model = require("model");
  if (model == "hubbard")
    store.model = Model::kHubbard;
  else if (model == "tfi")
    store.model = Model::kTfi;
  else
    fail("unknown model '" + model + "'");
  store.rows = std::stoi(require("rows"));
  store.cols = std::stoi(require("cols"));
  if (meta.count("n_up") || meta.count("n_down"))
    store.constraint = SectorConstraint::fixed_fill(std::stoi(require("n_up")),
                                                    std::stoi(require("n_down")));
  else
    store.constraint = SectorConstraint::all_spins();
  if (meta.count("source")) store.source = meta["source"];
  if (meta.count("seed")) store.seed = std::stoull(meta["seed"]);
  if (meta.count("layers")) store.layers = std::stoi(meta["layers"]);

  const int L = store.sites();
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string bits = line;
    if (store.model == Model::kHubbard) {
      auto bar = line.find('|');
      if (bar == std::string::npos) fail("Hubbard sample missing '|' separator");
      bits = line.substr(0, bar) + line.substr(bar + 1);
      if (static_cast<int>(bar) != L) fail("up-sector width mismatch");
    }
    BasisState x;
    try {
      x = BasisState::from_string(bits);
    } catch (const std::exception &e) {
      fail(e.what());
    }
    if (x.width() != store.width()) fail("sample width mismatch");
    store.samples.push_back(x);
  }
  return store;
}

/// Per-spin Hamming weights of a Hubbard sample.
inline std::pair<int, int> fill_of(const BasisState &x, int L) {
  int up = x.popcount_range(0, L);
  int down = x.popcount_range(L, 2 * L);
  return {up, down};
}

struct PostselectResult {
  SampleStore store;
  double retention = 0.0;
};

/// Keeps only samples whose per-spin occupation numbers match the constraint.
inline PostselectResult postselect(const SampleStore &input,
                                   const SectorConstraint &constraint) {
  if (constraint.kind != SectorConstraint::Kind::kFixedFill)
    throw std::invalid_argument("postselect requires a fixed-fill constraint");
  if (input.model != Model::kHubbard)
    throw std::invalid_argument("postselect applies to Hubbard stores");
  PostselectResult out;
  out.store = input;
  out.store.constraint = constraint;
  out.store.samples.clear();
  const int L = input.sites();
  for (const auto &x : input.samples) {
    auto [up, down] = fill_of(x, L);
    if (up == constraint.n_up && down == constraint.n_down)
      out.store.samples.push_back(x);
  }
  if (input.samples.empty() || out.store.samples.empty())
    throw std::runtime_error("postselect: no samples satisfy the constraint");
  out.retention = static_cast<double>(out.store.samples.size()) /
                  static_cast<double>(input.samples.size());
  return out;
}

/// One uniform draw from a sector (random bits, or random per-spin fills).
inline BasisState uniform_sector_sample(Model model, int L,
                                        const SectorConstraint &constraint,
                                        Rng &rng) {
  if (constraint.kind == SectorConstraint::Kind::kAllSpins) {
    BasisState x(L);
    for (int i = 0; i < L; ++i)
      if (rng.next_u64() & 1u) x.set(i);
    return x;
  }
  BasisState x(2 * L);
  for (int s = 0; s < 2; ++s) {
    int need = s == 0 ? constraint.n_up : constraint.n_down;
    // Floyd's algorithm for a uniform n-subset.
    std::vector<int> chosen;
    for (int j = L - need; j < L; ++j) {
      int t = static_cast<int>(rng.uniform_index(j + 1));
      bool hit = false;
      for (int c : chosen) hit |= (c == t);
      chosen.push_back(hit ? j : t);
    }
    for (int c : chosen) x.set(s * L + c);
  }
  return x;
}

/**
 * Sampled noise mixture: each output drawn from the base store with
 * probability 1-epsilon, else uniform over the sector.
 */
inline SampleStore mix_with_uniform(const SampleStore &base, double epsilon,
                                    std::size_t n, std::uint64_t seed) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (base.samples.empty() && epsilon < 1.0)
    throw std::invalid_argument("mix_with_uniform: empty base store");
  SampleStore out = base;
  out.samples.clear();
  out.seed = seed;
  Rng rng(seed, 0x31f);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < epsilon)
      out.samples.push_back(
          uniform_sector_sample(base.model, base.sites(), base.constraint, rng));
    else
      out.samples.push_back(base.samples[rng.uniform_index(base.samples.size())]);
  }
  return out;
}

/// Exact-distribution noise mixture: (1-eps) p + eps u.
inline Eigen::VectorXd mix_with_uniform_exact(const Eigen::VectorXd &p,
                                              double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  double u = 1.0 / static_cast<double>(p.size());
  return (1.0 - epsilon) * p + Eigen::VectorXd::Constant(p.size(), epsilon * u);
}

/**
 * Builds large-system samples by concatenating `factor` independent draws
 * (with replacement) of the source store. TFI: plain bitstring concatenation
 * in site order. Hubbard: up sectors concatenated, then down sectors, so the
 * bit convention is preserved and per-spin weights add.
 */
inline SampleStore concatenate(const SampleStore &source, int factor,
                               std::size_t n, std::uint64_t seed) {
  if (factor < 2) throw std::invalid_argument("concatenate: factor must be >= 2");
  if (source.samples.empty())
    throw std::invalid_argument("concatenate: empty source store");
  const int L = source.sites();
  const int big_L = L * factor;
  if ((source.model == Model::kHubbard ? 2 * big_L : big_L) >
      BasisState::kCapacity)
    throw std::invalid_argument("concatenate: target exceeds bit capacity");

  SampleStore out;
  out.model = source.model;
  out.rows = source.rows;
  out.cols = source.cols * factor;
  out.source = source.source;
  out.seed = seed;
  out.layers = source.layers;
  if (source.constraint.kind == SectorConstraint::Kind::kFixedFill)
    out.constraint = SectorConstraint::fixed_fill(source.constraint.n_up * factor,
                                                  source.constraint.n_down * factor);
  Rng rng(seed, 0xCC);
  for (std::size_t i = 0; i < n; ++i) {
    BasisState big(out.width());
    for (int blk = 0; blk < factor; ++blk) {
      const BasisState &part =
          source.samples[rng.uniform_index(source.samples.size())];
      if (source.model == Model::kHubbard) {
        for (int k = 0; k < L; ++k) {
          if (part.test(k)) big.set(blk * L + k);
          if (part.test(L + k)) big.set(big_L + blk * L + k);
        }
      } else {
        for (int k = 0; k < L; ++k)
          if (part.test(k)) big.set(blk * L + k);
      }
    }
    out.samples.push_back(big);
  }
  return out;
}

}  // namespace qevmc

#endif  // QEVMC_SAMPLES_HPP
