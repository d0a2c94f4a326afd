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

#ifndef QEVMC_MIXER_HPP
#define QEVMC_MIXER_HPP

#include <utility>
#include <vector>

#include "qevmc/basis_state.hpp"
#include "qevmc/gutzwiller.hpp"
#include "qevmc/lattice.hpp"
#include "qevmc/nqs.hpp"
#include "qevmc/rng.hpp"

namespace qevmc {

/**
 * Electron-hop proposal: a (spin sector, adjacent bond) slot is chosen
 * uniformly; if the bond is a 01/10 pair the electron hops, otherwise the
 * proposal is a self-loop so the kernel stays symmetric.
 */
class HopMixer {
 public:
  using Move = GutzwillerWalker::Move;

  explicit HopMixer(const LatticeSpec &lattice)
      : sites_(lattice.sites()), bonds_(lattice.bonds()) {}

  std::size_t n_slots() const { return 2 * bonds_.size(); }

  Move propose(const BasisState &x, Rng &rng) const {
    std::size_t slot = rng.uniform_index(n_slots());
    int spin = static_cast<int>(slot / bonds_.size());
    auto [i, j] = bonds_[slot % bonds_.size()];
    int off = spin * sites_;
    if (x.test(off + i) == x.test(off + j)) return Move{spin, i, i};  // self-loop
    return x.test(off + i) ? Move{spin, i, j} : Move{spin, j, i};
  }

  /// All (move, probability) pairs, for exact transition-matrix builds.
  std::vector<std::pair<Move, double>> proposals(const BasisState &x) const {
    std::vector<std::pair<Move, double>> out;
    double p = 1.0 / static_cast<double>(n_slots());
    for (int spin = 0; spin < 2; ++spin) {
      int off = spin * sites_;
      for (auto [i, j] : bonds_) {
        if (x.test(off + i) == x.test(off + j))
          out.push_back({Move{spin, i, i}, p});
        else if (x.test(off + i))
          out.push_back({Move{spin, i, j}, p});
        else
          out.push_back({Move{spin, j, i}, p});
      }
    }
    return out;
  }

  static BasisState apply(const BasisState &x, const Move &m, int sites) {
    BasisState y = x;
    if (!m.self_loop()) {
      y.flip(m.spin * sites + m.from);
      y.flip(m.spin * sites + m.to);
    }
    return y;
  }

 private:
  int sites_;
  std::vector<std::pair<int, int>> bonds_;
};

/// Single-spin-flip proposal: flip one uniformly chosen bit. Never self-loops.
class FlipMixer {
 public:
  using Move = NqsWalker::Move;

  explicit FlipMixer(int n) : n_(n) {}

  Move propose(const BasisState &, Rng &rng) const {
    return Move{static_cast<int>(rng.uniform_index(n_))};
  }

  std::vector<std::pair<Move, double>> proposals(const BasisState &) const {
    std::vector<std::pair<Move, double>> out;
    double p = 1.0 / n_;
    for (int j = 0; j < n_; ++j) out.push_back({Move{j}, p});
    return out;
  }

  static BasisState apply(const BasisState &x, const Move &m, int) {
    BasisState y = x;
    if (!m.self_loop()) y.flip(m.site);
    return y;
  }

 private:
  int n_;
};

}  // namespace qevmc

#endif  // QEVMC_MIXER_HPP
