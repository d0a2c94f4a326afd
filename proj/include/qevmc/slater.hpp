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

#ifndef QEVMC_SLATER_HPP
#define QEVMC_SLATER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qevmc/hamiltonian.hpp"
#include "qevmc/rng.hpp"
#include "qevmc/sector_basis.hpp"

namespace qevmc {

/// log|det| and sign of a square matrix via LU.
struct SignedLogDet {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;
};

inline SignedLogDet signed_log_det(const Eigen::MatrixXd &m) {
  if (m.rows() == 0) return {0.0, 1};  // empty determinant is 1
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  SignedLogDet out;
  out.log_abs = 0.0;
  out.sign = lu.permutationP().determinant() > 0 ? 1 : -1;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double d = lu.matrixLU()(i, i);
    if (d == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (d < 0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
  }
  return out;
}

/**
 * Slater determinant built from the lowest eigenvectors of the
 * single-particle hopping matrix, one block per spin sector.
 *
 * Degenerate shells get a deterministic basis: eigenvalues ascending, ties
 * broken by ascending index of the largest-magnitude component, and each
 * column's largest-magnitude component made positive.
 */
class SlaterDeterminant {
 public:
  SlaterDeterminant() = default;

  SlaterDeterminant(const LatticeSpec &lattice, int n_up, int n_down)
      : n_up_(n_up), n_down_(n_down) {
    const int L = lattice.sites();
    if (n_up > L || n_down > L)
      throw std::invalid_argument("SlaterDeterminant: more electrons than sites");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        single_particle_hopping(lattice));
    Eigen::MatrixXd vecs = es.eigenvectors();
    Eigen::VectorXd vals = es.eigenvalues();
    canonicalize_degenerate(vecs, vals);
    orbitals_up_ = vecs.leftCols(n_up);
    orbitals_down_ = vecs.leftCols(n_down);
    energy_up_ = vals.head(n_up).sum();
    energy_down_ = vals.head(n_down).sum();
  }

  int sites() const { return static_cast<int>(orbitals_up_.rows()); }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  const Eigen::MatrixXd &orbitals_up() const { return orbitals_up_; }
  const Eigen::MatrixXd &orbitals_down() const { return orbitals_down_; }

  /// Non-interacting (U = 0) energy of the filled orbitals.
  double hopping_energy() const { return energy_up_ + energy_down_; }

  /// Rows of the orbital block on the occupied sites of one spin sector.
  Eigen::MatrixXd occupied_rows(const BasisState &x, int spin) const {
    const int L = sites();
    const Eigen::MatrixXd &orb = spin == 0 ? orbitals_up_ : orbitals_down_;
    const int off = spin == 0 ? 0 : L;
    Eigen::MatrixXd sub(orb.cols(), orb.cols());
    int r = 0;
    for (int i = 0; i < L; ++i)
      if (x.test(off + i)) sub.row(r++) = orb.row(i);
    if (r != orb.cols())
      throw std::invalid_argument("occupied_rows: wrong particle number");
    return sub;
  }

  /// Signed log-amplitude det_up(x) * det_down(x) on sorted occupied rows.
  SignedLogDet log_amplitude(const BasisState &x) const {
    SignedLogDet up = signed_log_det(occupied_rows(x, 0));
    if (up.sign == 0) return up;
    SignedLogDet down = signed_log_det(occupied_rows(x, 1));
    if (down.sign == 0) return down;
    return {up.log_abs + down.log_abs, up.sign * down.sign};
  }

  /// Diagonal of the orbital projector (mean site occupation) per spin.
  Eigen::VectorXd occupation_profile(int spin) const {
    const Eigen::MatrixXd &orb = spin == 0 ? orbitals_up_ : orbitals_down_;
    return orb.cwiseProduct(orb).rowwise().sum();
  }

 private:
  static void canonicalize_degenerate(Eigen::MatrixXd &vecs,
                                      const Eigen::VectorXd &vals) {
    const Eigen::Index n = vals.size();
    auto peak_index = [&](Eigen::Index c) {
      Eigen::Index best = 0;
      vecs.col(c).cwiseAbs().maxCoeff(&best);
      return best;
    };
    Eigen::Index start = 0;
    while (start < n) {
      Eigen::Index stop = start + 1;
      while (stop < n && vals[stop] - vals[start] < 1e-10) ++stop;
      if (stop - start > 1) {
        std::vector<Eigen::Index> order;
        for (Eigen::Index c = start; c < stop; ++c) order.push_back(c);
        std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
          return peak_index(a) < peak_index(b);
        });
        Eigen::MatrixXd block(vecs.rows(), stop - start);
        for (Eigen::Index k = 0; k < stop - start; ++k)
          block.col(k) = vecs.col(order[k]);
        vecs.middleCols(start, stop - start) = block;
      }
      for (Eigen::Index c = start; c < stop; ++c)
        if (vecs(peak_index(c), c) < 0) vecs.col(c) = -vecs.col(c);
      start = stop;
    }
  }

  Eigen::MatrixXd orbitals_up_, orbitals_down_;
  int n_up_ = 0, n_down_ = 0;
  double energy_up_ = 0.0, energy_down_ = 0.0;
};

/// Exact distribution |<x|psi_SD>|^2 over an enumerable sector basis.
inline Eigen::VectorXd slater_distribution(const SlaterDeterminant &sd,
                                           const SectorBasis &basis) {
  Eigen::VectorXd logw(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    SignedLogDet d = sd.log_amplitude(basis.state(k));
    logw[k] = d.sign == 0 ? -std::numeric_limits<double>::infinity()
                          : 2.0 * d.log_abs;
  }
  double mx = logw.maxCoeff();
  Eigen::VectorXd p = (logw.array() - mx).exp();
  return p / p.sum();
}

namespace detail {

/// One projection-DPP draw of k sites with kernel Phi Phi^T (Phi orthonormal
/// L x k): sequential conditional sampling, exact in law.
inline std::vector<int> sample_projection_dpp(const Eigen::MatrixXd &phi,
                                              Rng &rng) {
  const int L = static_cast<int>(phi.rows());
  const int k = static_cast<int>(phi.cols());
  Eigen::MatrixXd V = phi;
  std::vector<int> chosen;
  chosen.reserve(k);
  for (int step = 0; step < k; ++step) {
    Eigen::VectorXd w = V.cwiseProduct(V).rowwise().sum();
    double total = w.sum();
    if (total <= 0.0) throw std::runtime_error("dpp sampler: degenerate kernel");
    double u = rng.uniform() * total;
    int site = 0;
    double acc = 0.0;
    for (; site < L; ++site) {
      acc += w[site];
      if (u < acc) break;
    }
    if (site == L) site = L - 1;
    chosen.push_back(site);
    // Rotate the column basis so the chosen row lives in column 0 only,
    // then drop that column: the rest spans the conditional space.
    const int r = static_cast<int>(V.cols());
    Eigen::VectorXd row = V.row(site).transpose();
    double nrm = row.norm();
    if (nrm <= 0.0) throw std::runtime_error("dpp sampler: zero-probability branch");
    row /= nrm;
    // Householder reflection mapping e_1 -> row (applied on the right).
    Eigen::VectorXd hv = row;
    hv[0] -= 1.0;
    double hn = hv.squaredNorm();
    if (hn > 1e-30) {
      Eigen::VectorXd Vh = V * hv;
      V -= (2.0 / hn) * Vh * hv.transpose();
    }
    V = V.rightCols(r - 1).eval();
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace detail

/// Direct sample from the Slater measurement distribution (both sectors).
inline BasisState sample_slater(const SlaterDeterminant &sd, Rng &rng) {
  const int L = sd.sites();
  BasisState x(2 * L);
  for (int site : detail::sample_projection_dpp(sd.orbitals_up(), rng))
    x.set(site);
  for (int site : detail::sample_projection_dpp(sd.orbitals_down(), rng))
    x.set(L + site);
  return x;
}

}  // namespace qevmc

#endif  // QEVMC_SLATER_HPP
