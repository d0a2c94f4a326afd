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

#ifndef QEVMC_GUTZWILLER_HPP
#define QEVMC_GUTZWILLER_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qevmc/hamiltonian.hpp"
#include "qevmc/sector_basis.hpp"
#include "qevmc/slater.hpp"

namespace qevmc {

struct LogAmplitude {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;  // 0 flags an exactly-zero amplitude
};

class GutzwillerWalker;

/**
 * Gutzwiller-projected Slater determinant,
 *   psi(x) = exp(-c D(x)) det_up(x) det_down(x), unnormalised.
 */
class GutzwillerWF {
 public:
  using Walker = GutzwillerWalker;

  GutzwillerWF() = default;
  GutzwillerWF(double c, SlaterDeterminant slater)
      : c_(c), slater_(std::move(slater)) {
    if (c < 0) throw std::invalid_argument("Gutzwiller parameter must be >= 0");
  }

  double c() const { return c_; }
  const SlaterDeterminant &slater() const { return slater_; }
  int sites() const { return slater_.sites(); }

  LogAmplitude log_amplitude(const BasisState &x) const {
    SignedLogDet d = slater_.log_amplitude(x);
    if (d.sign == 0) return {};
    return {d.log_abs - c_ * double_occupancy(x, sites()), d.sign};
  }

  /// Signed psi(y)/psi(x); throws when psi(x) = 0.
  double ratio(const BasisState &x, const BasisState &y) const {
    LogAmplitude ax = log_amplitude(x);
    if (ax.sign == 0)
      throw std::domain_error("Gutzwiller ratio: zero amplitude at x");
    LogAmplitude ay = log_amplitude(y);
    if (ay.sign == 0) return 0.0;
    return ay.sign * ax.sign * std::exp(ay.log_abs - ax.log_abs);
  }

 private:
  double c_ = 0.0;
  SlaterDeterminant slater_;
};

/**
 * Per-chain Gutzwiller evaluation cache: occupied-site slots and the
 * inverse of the occupied-row orbital matrix per spin sector.
 *
 * Hops update the inverse by a rank-one row replacement; for L <= 12 (or
 * every 200 accepted moves) everything is recomputed from scratch to cap
 * numerical drift.
 */
class GutzwillerWalker {
 public:
  /// Hop move within one spin sector; self-loops carry from == to.
  struct Move {
    int spin = 0;       // 0 up, 1 down
    int from = 0;       // site indices
    int to = 0;
    bool self_loop() const { return from == to; }
  };

  GutzwillerWalker(const GutzwillerWF &wf, const BasisState &x)
      : wf_(&wf), state_(x) {
    rebuild();
  }

  const BasisState &current() const { return state_; }
  const GutzwillerWF &wf() const { return *wf_; }

  LogAmplitude log_amplitude() const {
    if (sign_[0] == 0 || sign_[1] == 0) return {};
    return {log_abs_[0] + log_abs_[1] -
                wf_->c() * double_occupancy(state_, wf_->sites()),
            sign_[0] * sign_[1] * perm_sign_[0] * perm_sign_[1]};
  }

  bool zero_amplitude() const { return sign_[0] == 0 || sign_[1] == 0; }

  /// Signed psi(y)/psi(x) for a hop, including fermionic reordering sign
  /// and the double-occupancy factor.
  double ratio(const Move &m) const {
    if (m.self_loop()) return 1.0;
    return slot_det_ratio(m) * parity_sign(m) *
           std::exp(-wf_->c() * occupancy_delta(m));
  }

  /// log |psi(y)/psi(x)|; -inf for an exactly-zero target amplitude.
  double log_abs_ratio(const Move &m) const {
    double r = ratio(m);
    return r == 0.0 ? -std::numeric_limits<double>::infinity()
                    : std::log(std::abs(r));
  }

  void accept(const Move &m) {
    if (m.self_loop()) return;
    const int L = wf_->sites();
    const int s = m.spin;
    const Eigen::MatrixXd &orb =
        s == 0 ? wf_->slater().orbitals_up() : wf_->slater().orbitals_down();
    const int slot = slot_of_[s][m.from];
    const double det_ratio = slot_det_ratio(m);
    const Eigen::RowVectorXd old_row = orb.row(m.from);

    state_.flip(s * L + m.from);
    state_.flip(s * L + m.to);
    occ_[s][slot] = m.to;
    slot_of_[s][m.from] = -1;
    slot_of_[s][m.to] = slot;
    ++accepted_;

    if (L <= 12 || accepted_ % kRecomputeEvery == 0 || det_ratio == 0.0 ||
        sign_[s] == 0) {
      rebuild_sector(s);
      return;
    }
    // Sherman-Morrison row replacement: A' = A + e_slot d^T.
    Eigen::VectorXd d = (orb.row(m.to) - old_row).transpose();
    Eigen::VectorXd col = inv_[s].col(slot);
    Eigen::RowVectorXd dtAinv = d.transpose() * inv_[s];
    inv_[s].noalias() -= (col * dtAinv) / det_ratio;
    log_abs_[s] += std::log(std::abs(det_ratio));
    if (det_ratio < 0) sign_[s] = -sign_[s];
    perm_sign_[s] = permutation_sign(occ_[s]);
  }

  /// Local energy E_loc(x) = U D(x) - sum over hops of det-ratio factors.
  double local_energy(const HamiltonianSpec &spec) const {
    const int L = wf_->sites();
    double e = spec.U * double_occupancy(state_, L);
    for (int s = 0; s < 2; ++s) {
      int off = s * L;
      for (auto [i, j] : spec.lattice.bonds()) {
        if (state_.test(off + i) == state_.test(off + j)) continue;
        Move m{s, state_.test(off + i) ? i : j, state_.test(off + i) ? j : i};
        // H_{x,y} carries -jw_sign; the wavefunction ratio carries the same
        // reordering sign, so the two cancel and only the slot-det ratio and
        // the Gutzwiller factor survive.
        e -= slot_det_ratio(m) * std::exp(-wf_->c() * occupancy_delta(m));
      }
    }
    return e;
  }

  /// Consistency check hook: fresh log-amplitude vs cached.
  double cache_drift() const {
    GutzwillerWalker fresh(*wf_, state_);
    LogAmplitude a = fresh.log_amplitude();
    LogAmplitude b = log_amplitude();
    if (a.sign == 0 && b.sign == 0) return 0.0;
    return std::abs(a.log_abs - b.log_abs);
  }

 private:
  static constexpr int kRecomputeEvery = 200;

  int occupancy_delta(const Move &m) const {
    const int L = wf_->sites();
    int other = 1 - m.spin;
    int d = 0;
    if (state_.test(other * L + m.from)) --d;
    if (state_.test(other * L + m.to)) ++d;
    return d;
  }

  /// Fermionic reordering sign: parity of occupied sites strictly between
  /// the two endpoints within the hopping sector.
  int parity_sign(const Move &m) const {
    const int L = wf_->sites();
    int a = m.spin * L + m.from;
    int b = m.spin * L + m.to;
    return jordan_wigner_sign(state_, a, b);
  }

  /// Row-replacement determinant ratio in slot order (no reordering sign).
  double slot_det_ratio(const Move &m) const {
    const int s = m.spin;
    if (sign_[s] == 0) throw std::domain_error("walker on zero amplitude");
    const Eigen::MatrixXd &orb =
        s == 0 ? wf_->slater().orbitals_up() : wf_->slater().orbitals_down();
    int slot = slot_of_[s][m.from];
    if (slot < 0) throw std::logic_error("hop from an empty site");
    return orb.row(m.to) * inv_[s].col(slot);
  }

  void rebuild() {
    for (int s = 0; s < 2; ++s) {
      const int L = wf_->sites();
      occ_[s].clear();
      slot_of_[s].assign(L, -1);
      for (int i = 0; i < L; ++i)
        if (state_.test(s * L + i)) {
          slot_of_[s][i] = static_cast<int>(occ_[s].size());
          occ_[s].push_back(i);
        }
      rebuild_sector(s);
      perm_sign_[s] = 1;  // slots are in ascending site order after rebuild()
    }
  }

  void rebuild_sector(int s) {
    const Eigen::MatrixXd &orb =
        s == 0 ? wf_->slater().orbitals_up() : wf_->slater().orbitals_down();
    const int k = static_cast<int>(occ_[s].size());
    Eigen::MatrixXd A(k, k);
    for (int r = 0; r < k; ++r) A.row(r) = orb.row(occ_[s][r]);
    SignedLogDet d = signed_log_det(A);
    log_abs_[s] = d.log_abs;
    sign_[s] = d.sign;
    perm_sign_[s] = permutation_sign(occ_[s]);
    if (d.sign != 0) inv_[s] = A.inverse();
  }

  static int permutation_sign(const std::vector<int> &slots) {
    // parity of the permutation sorting slot order into ascending site order
    int sign = 1;
    for (std::size_t i = 0; i < slots.size(); ++i)
      for (std::size_t j = i + 1; j < slots.size(); ++j)
        if (slots[i] > slots[j]) sign = -sign;
    return sign;
  }

  const GutzwillerWF *wf_;
  BasisState state_;
  std::vector<int> occ_[2];      // slot -> site
  std::vector<int> slot_of_[2];  // site -> slot (-1 when empty)
  Eigen::MatrixXd inv_[2];
  double log_abs_[2] = {0, 0};
  int sign_[2] = {1, 1};
  int perm_sign_[2] = {1, 1};
  long accepted_ = 0;
};

/// Exact normalised distribution |psi(x)|^2 over an enumerable basis.
template <typename WF>
Eigen::VectorXd exact_distribution(const WF &wf, const SectorBasis &basis) {
  Eigen::VectorXd logw(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    LogAmplitude a = wf.log_amplitude(basis.state(k));
    logw[k] = a.sign == 0 ? -std::numeric_limits<double>::infinity()
                          : 2.0 * a.log_abs;
  }
  double mx = logw.maxCoeff();
  Eigen::VectorXd p = (logw.array() - mx).exp();
  return p / p.sum();
}

/// Exact variational energy <psi|H|psi>/<psi|psi> by full enumeration.
template <typename WF>
double exact_variational_energy(const WF &wf, const SparseOperator &H,
                                const SectorBasis &basis) {
  Eigen::VectorXd amp(basis.size());
  Eigen::VectorXd logw(basis.size());
  std::vector<int> signs(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    LogAmplitude a = wf.log_amplitude(basis.state(k));
    logw[k] = a.sign == 0 ? -std::numeric_limits<double>::infinity()
                          : a.log_abs;
    signs[k] = a.sign;
  }
  double mx = logw.maxCoeff();
  for (std::size_t k = 0; k < basis.size(); ++k)
    amp[k] = signs[k] * std::exp(logw[k] - mx);
  Eigen::VectorXd Ha;
  H.apply(amp, Ha);
  return amp.dot(Ha) / amp.squaredNorm();
}

}  // namespace qevmc

#endif  // QEVMC_GUTZWILLER_HPP
