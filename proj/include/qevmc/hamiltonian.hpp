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

#ifndef QEVMC_HAMILTONIAN_HPP
#define QEVMC_HAMILTONIAN_HPP

#include <stdexcept>
#include <utility>

#include "qevmc/lattice.hpp"
#include "qevmc/sector_basis.hpp"
#include "qevmc/sparse.hpp"

namespace qevmc {

/**
 * Jordan-Wigner sign of a hop between orbitals a and b (orbital order: up
 * sector sites 0..L-1, then down sector). The sign is the parity of occupied
 * orbitals strictly between a and b, evaluated on the state before the hop
 * with the source orbital cleared; for a simple pair hop this equals the
 * parity of bits strictly between the two positions.
 */
inline int jordan_wigner_sign(const BasisState &x, int a, int b) {
  int lo = a < b ? a : b;
  int hi = a < b ? b : a;
  int parity = x.popcount_range(lo + 1, hi);
  return (parity % 2 == 0) ? 1 : -1;
}

/// Diagonal TFI energy -J sum_<ij> s_i s_j of a configuration.
inline double tfi_diagonal(const BasisState &x, const LatticeSpec &lat,
                           double J) {
  double e = 0.0;
  for (auto [i, j] : lat.bonds()) e -= J * x.spin(i) * x.spin(j);
  return e;
}

/**
 * Builds the sector Hamiltonian as a real symmetric sparse matrix.
 *   Hubbard: hopping with JW signs + U * D(x) diagonal.
 *   TFI: -J ZZ diagonal, -h single-flip off-diagonal.
 */
inline SparseOperator build_hamiltonian(const HamiltonianSpec &spec,
                                        const SectorBasis &basis) {
  const LatticeSpec &lat = spec.lattice;
  const int L = lat.sites();
  SparseOperator H(basis.size());

  if (lat.model == Model::kHubbard) {
    if (basis.constraint().kind != SectorConstraint::Kind::kFixedFill)
      throw std::invalid_argument("Hubbard Hamiltonian needs a fixed-fill basis");
    auto bonds = lat.bonds();
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const BasisState &x = basis.state(r);
      H.add(r, r, spec.U * double_occupancy(x, L));
      for (int sector = 0; sector < 2; ++sector) {
        int off = sector * L;
        for (auto [i, j] : bonds) {
          int a = off + i;
          int b = off + j;
          if (x.test(a) == x.test(b)) continue;
          BasisState y = x;
          y.flip(a);
          y.flip(b);
          int sign = jordan_wigner_sign(x, a, b);
          H.add(r, basis.index(y), -1.0 * sign);
        }
      }
    }
  } else {
    if (basis.constraint().kind != SectorConstraint::Kind::kAllSpins)
      throw std::invalid_argument("TFI Hamiltonian needs an all-spins basis");
    for (std::size_t r = 0; r < basis.size(); ++r) {
      const BasisState &x = basis.state(r);
      H.add(r, r, tfi_diagonal(x, lat, spec.J));
      for (int jsite = 0; jsite < L; ++jsite) {
        BasisState y = x;
        y.flip(jsite);
        H.add(r, basis.index(y), -spec.h);
      }
    }
  }
  H.finalize();
  return H;
}

/// Hopping part only (U = 0), used for the Slater determinant reference.
inline SparseOperator build_hopping(const HamiltonianSpec &spec,
                                    const SectorBasis &basis) {
  HamiltonianSpec s = spec;
  s.U = 0.0;
  return build_hamiltonian(s, basis);
}

/**
 * Exact ground energy of the open 1D transverse-field Ising chain via its
 * free-fermion form: E0 = -1/2 sum of singular values of A + B, where A is
 * the quadratic and B the pairing block of the fermionized Hamiltonian.
 * Valid for any chain length, so it serves as the reference energy for
 * systems beyond exact diagonalization.
 */
inline double tfi_chain_ground_energy(int n, double J, double h) {
  if (n < 1) throw std::invalid_argument("chain length must be >= 1");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);  // A + B
  for (int j = 0; j < n; ++j) m(j, j) = 2.0 * h;
  for (int j = 0; j + 1 < n; ++j) m(j, j + 1) = -2.0 * J;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return -0.5 * svd.singularValues().sum();
}

/// Single-particle hopping matrix -A where A is the lattice adjacency.
inline Eigen::MatrixXd single_particle_hopping(const LatticeSpec &lat) {
  const int L = lat.sites();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(L, L);
  for (auto [i, j] : lat.bonds()) {
    t(i, j) = -1.0;
    t(j, i) = -1.0;
  }
  return t;
}

}  // namespace qevmc

#endif  // QEVMC_HAMILTONIAN_HPP
