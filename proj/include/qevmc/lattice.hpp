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

#ifndef QEVMC_LATTICE_HPP
#define QEVMC_LATTICE_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qevmc {

enum class Model { kHubbard, kTfi };
enum class Boundary { kOpen, kPeriodic };

inline std::string model_name(Model m) {
  return m == Model::kHubbard ? "hubbard" : "tfi";
}

/// Rectangular lattice; 1D chains have rows = 1. Site index is row-major.
struct LatticeSpec {
  int rows = 1;
  int cols = 2;
  Boundary boundary = Boundary::kOpen;
  Model model = Model::kTfi;

  int sites() const { return rows * cols; }
  int site(int r, int c) const { return r * cols + c; }

  void validate() const {
    if (rows < 1 || cols < 1 || sites() < 2)
      throw std::invalid_argument("lattice must have at least 2 sites");
  }

  /// Nearest-neighbour bonds (i < j except for periodic wrap links).
  std::vector<std::pair<int, int>> bonds() const {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c + 1 < cols; ++c)
        out.emplace_back(site(r, c), site(r, c + 1));
    if (boundary == Boundary::kPeriodic && cols > 2)
      for (int r = 0; r < rows; ++r) out.emplace_back(site(r, cols - 1), site(r, 0));
    for (int c = 0; c < cols; ++c)
      for (int r = 0; r + 1 < rows; ++r)
        out.emplace_back(site(r, c), site(r + 1, c));
    if (boundary == Boundary::kPeriodic && rows > 2)
      for (int c = 0; c < cols; ++c) out.emplace_back(site(rows - 1, c), site(0, c));
    return out;
  }

  /// Bonds split by the parity of the left/top site index, used for the
  /// layered ansatz (even-indexed first, then odd).
  std::vector<std::pair<int, int>> bonds_with_parity(int parity) const {
    std::vector<std::pair<int, int>> out;
    for (auto [i, j] : bonds())
      if (i % 2 == parity) out.emplace_back(i, j);
    return out;
  }
};

/**
 * Hamiltonian parameters. Hopping amplitude is fixed at 1.
 *   Hubbard: H = -sum_<ij>,s (a^dag_is a_js + h.c.) + U sum_k n_ku n_kd
 *   TFI:     H = -J sum_i Z_i Z_{i+1} - h sum_j X_j
 */
struct HamiltonianSpec {
  LatticeSpec lattice;
  double U = 4.0;  // Hubbard onsite
  double J = 1.0;  // Ising coupling
  double h = 1.0;  // transverse field

  static HamiltonianSpec hubbard(int rows, int cols, double U = 4.0,
                                 Boundary bc = Boundary::kOpen) {
    HamiltonianSpec s;
    s.lattice = {rows, cols, bc, Model::kHubbard};
    s.lattice.validate();
    s.U = U;
    return s;
  }

  static HamiltonianSpec tfi(int n, double h = 1.0, double J = 1.0,
                             Boundary bc = Boundary::kOpen) {
    HamiltonianSpec s;
    s.lattice = {1, n, bc, Model::kTfi};
    s.lattice.validate();
    s.J = J;
    s.h = h;
    return s;
  }
};

}  // namespace qevmc

#endif  // QEVMC_LATTICE_HPP
