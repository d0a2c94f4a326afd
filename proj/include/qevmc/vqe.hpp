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

#ifndef QEVMC_VQE_HPP
#define QEVMC_VQE_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qevmc/bfgs.hpp"
#include "qevmc/exact.hpp"
#include "qevmc/hamiltonian.hpp"
#include "qevmc/samples.hpp"
#include "qevmc/slater.hpp"

namespace qevmc {

/**
 * Layered product ansatz built from commuting pieces of the target
 * Hamiltonian, three parameters per layer:
 *   TFI:     (even-ZZ, odd-ZZ, X-field), initial state all-plus;
 *   Hubbard: (onsite, even-bond hopping, odd-bond hopping), initial state
 *            the Slater-determinant ground state of the hopping part.
 */
struct VqeAnsatz {
  Model model = Model::kTfi;
  int layers = 1;
  Eigen::VectorXd theta;

  static VqeAnsatz make(Model model, int layers) {
    VqeAnsatz a;
    a.model = model;
    a.layers = layers;
    a.theta = Eigen::VectorXd::Zero(3 * layers);
    return a;
  }

  void validate() const {
    if (layers < 0) throw std::invalid_argument("layers must be >= 0");
    if (theta.size() != 3 * layers)
      throw std::invalid_argument("theta size must be 3 * layers");
  }
};

/**
 * Caches the sector basis, layer generators, and the initial state so
 * repeated preparations during optimisation stay cheap.
 */
class VqeSimulator {
 public:
  VqeSimulator(const HamiltonianSpec &spec, const SectorBasis &basis)
      : spec_(spec), basis_(&basis) {
    const int n = spec.lattice.sites();
    if (spec.lattice.model == Model::kTfi) {
      if (n > 24) throw std::invalid_argument("TFI VQE limited to N <= 24");
      zz_even_ = layer_diagonal(0);
      zz_odd_ = layer_diagonal(1);
      initial_.amplitudes = Eigen::VectorXcd::Constant(
          basis.size(), Complex(1.0 / std::sqrt(double(basis.size())), 0.0));
    } else {
      if (basis.size() > (1ULL << 24))
        throw std::invalid_argument("Hubbard VQE sector limited to 2^24");
      onsite_ = Eigen::VectorXd(basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k)
        onsite_[static_cast<Eigen::Index>(k)] =
            spec.U * double_occupancy(basis.state(k), n);
      hop_even_ = bond_hopping(0);
      hop_odd_ = bond_hopping(1);
      SlaterDeterminant sd(spec.lattice, basis.constraint().n_up,
                           basis.constraint().n_down);
      initial_.amplitudes.resize(basis.size());
      for (std::size_t k = 0; k < basis.size(); ++k) {
        SignedLogDet d = sd.log_amplitude(basis.state(k));
        initial_.amplitudes[static_cast<Eigen::Index>(k)] =
            d.sign == 0 ? Complex(0, 0)
                        : Complex(d.sign * std::exp(d.log_abs), 0.0);
      }
      initial_.amplitudes.normalize();
    }
    initial_.basis = basis_;
    // Above 2^16 states a sparse TFI Hamiltonian is too large to store;
    // the energy is then evaluated matrix-free from the layer diagonals.
    if (spec.lattice.model != Model::kTfi || n <= 16)
      H_ = build_hamiltonian(spec_, basis);
  }

  const SectorBasis &basis() const { return *basis_; }
  const HamiltonianSpec &spec() const { return spec_; }
  const SparseOperator &hamiltonian() const {
    if (H_.dim() == 0)
      throw std::logic_error("Hamiltonian not materialized at this size");
    return H_;
  }

  /// Applies the layers in order; returns the (unit-norm) final state.
  StateVector prepare(const VqeAnsatz &ansatz) const {
    ansatz.validate();
    if (ansatz.model != spec_.lattice.model)
      throw std::invalid_argument("ansatz/spec model mismatch");
    StateVector psi = initial_;
    const int n = spec_.lattice.sites();
    for (int l = 0; l < ansatz.layers; ++l) {
      double t0 = ansatz.theta[3 * l + 0];
      double t1 = ansatz.theta[3 * l + 1];
      double t2 = ansatz.theta[3 * l + 2];
      if (spec_.lattice.model == Model::kTfi) {
        apply_diagonal_phase(psi, zz_even_, t0);
        apply_diagonal_phase(psi, zz_odd_, t1);
        // field layer generator is -h sum_j X_j
        apply_transverse_rotation(psi.amplitudes, n, -t2 * spec_.h);
      } else {
        apply_diagonal_phase(psi, onsite_, t0);
        psi = evolve(hop_even_, t1, psi);
        psi = evolve(hop_odd_, t2, psi);
      }
    }
    return psi;
  }

  double energy(const VqeAnsatz &ansatz) const {
    StateVector psi = prepare(ansatz);
    if (H_.dim() != 0) return expectation(H_, psi);
    return tfi_energy_matrix_free(psi);
  }

  /// <psi|H|psi> without a stored matrix: diagonal ZZ part plus the
  /// transverse term summed over bit-flip pairs.
  double tfi_energy_matrix_free(const StateVector &psi) const {
    const int n = spec_.lattice.sites();
    const Eigen::VectorXcd &a = psi.amplitudes;
    double e = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
      e += (zz_even_[i] + zz_odd_[i]) * std::norm(a[i]);
    for (int q = 0; q < n; ++q) {
      const std::size_t stride = 1ULL << q;
      double s = 0.0;
      for (std::size_t base = 0; base < static_cast<std::size_t>(a.size());
           base += 2 * stride)
        for (std::size_t i = base; i < base + stride; ++i)
          s += 2.0 * std::real(std::conj(a[i]) * a[i + stride]);
      e -= spec_.h * s;
    }
    return e;
  }

  /**
   * Best parameters over `restarts` quasi-Newton runs, each initialised
   * uniformly in [-0.5, 0.5]. The all-zero circuit is always included, so
   * the returned energy never exceeds the theta = 0 energy.
   */
  std::pair<VqeAnsatz, double> optimize(int layers, int restarts,
                                        std::uint64_t seed) const {
    if (layers > 4)
      throw std::invalid_argument("optimize supports up to 4 layers");
    VqeAnsatz best = VqeAnsatz::make(spec_.lattice.model, layers);
    double best_e = energy(best);  // theta = 0 baseline
    auto objective = [&](const Eigen::VectorXd &theta) {
      VqeAnsatz a = VqeAnsatz::make(spec_.lattice.model, layers);
      a.theta = theta;
      return energy(a);
    };
    for (int r = 0; r < restarts; ++r) {
      Rng rng(seed, static_cast<std::uint64_t>(r));
      Eigen::VectorXd t0(3 * layers);
      for (int i = 0; i < t0.size(); ++i) t0[i] = rng.uniform() - 0.5;
      BfgsResult res = bfgs_minimize(objective, t0);
      if (!std::isfinite(res.value)) continue;  // divergent restart discarded
      if (res.value < best_e) {
        best_e = res.value;
        best.theta = res.x;
      }
    }
    return {best, best_e};
  }

 private:
  Eigen::VectorXd layer_diagonal(int parity) const {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(basis_->size());
    for (std::size_t k = 0; k < basis_->size(); ++k) {
      const BasisState &x = basis_->state(k);
      double e = 0.0;
      for (auto [i, j] : spec_.lattice.bonds_with_parity(parity))
        e -= spec_.J * x.spin(i) * x.spin(j);
      d[static_cast<Eigen::Index>(k)] = e;
    }
    return d;
  }

  SparseOperator bond_hopping(int parity) const {
    const int L = spec_.lattice.sites();
    SparseOperator op(basis_->size());
    auto bonds = spec_.lattice.bonds_with_parity(parity);
    for (std::size_t r = 0; r < basis_->size(); ++r) {
      const BasisState &x = basis_->state(r);
      for (int s = 0; s < 2; ++s) {
        int off = s * L;
        for (auto [i, j] : bonds) {
          if (x.test(off + i) == x.test(off + j)) continue;
          BasisState y = x;
          y.flip(off + i);
          y.flip(off + j);
          op.add(r, basis_->index(y), -1.0 * jordan_wigner_sign(x, off + i, off + j));
        }
      }
    }
    op.finalize();
    return op;
  }

  static void apply_diagonal_phase(StateVector &psi, const Eigen::VectorXd &d,
                                   double theta) {
    for (Eigen::Index i = 0; i < d.size(); ++i)
      psi.amplitudes[i] *= std::exp(Complex(0.0, -theta * d[i]));
  }

  HamiltonianSpec spec_;
  const SectorBasis *basis_;
  SparseOperator H_;
  Eigen::VectorXd zz_even_, zz_odd_, onsite_;
  SparseOperator hop_even_, hop_odd_;
  StateVector initial_;
};

namespace detail {

/// Vose alias table for O(1) discrete draws.
class AliasTable {
 public:
  explicit AliasTable(const Eigen::VectorXd &p) {
    const std::size_t n = static_cast<std::size_t>(p.size());
    prob_.resize(n);
    alias_.resize(n);
    double total = p.sum();
    std::vector<double> scaled(n);
    std::vector<std::size_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = p[static_cast<Eigen::Index>(i)] * n / total;
      (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
      std::size_t s = small.back();
      small.pop_back();
      std::size_t l = large.back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::size_t s : small) {
      prob_[s] = 1.0;
      alias_[s] = s;
    }
    for (std::size_t l : large) {
      prob_[l] = 1.0;
      alias_[l] = l;
    }
  }

  std::size_t draw(Rng &rng) const {
    std::size_t i = rng.uniform_index(prob_.size());
    return rng.uniform() < prob_[i] ? i : alias_[i];
  }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

}  // namespace detail

/**
 * n independent computational-basis measurements of a state,
 * p(x) = |<x|vec>|^2. Inverse-CDF for n <= dim, alias table above.
 */
inline SampleStore sample_state(const StateVector &vec, std::size_t n,
                                std::uint64_t seed,
                                const HamiltonianSpec &spec, int layers) {
  if (n < 1) throw std::invalid_argument("sample_state: n must be >= 1");
  if (vec.basis == nullptr)
    throw std::invalid_argument("sample_state: state has no basis");
  Eigen::VectorXd p = vec.probabilities();

  SampleStore store;
  store.model = spec.lattice.model;
  store.rows = spec.lattice.rows;
  store.cols = spec.lattice.cols;
  store.constraint = vec.basis->constraint();
  store.source = "vqe-sim";
  store.seed = seed;
  store.layers = layers;

  Rng rng(seed, 0x5a);
  if (n > vec.dim()) {
    detail::AliasTable table(p);
    for (std::size_t i = 0; i < n; ++i)
      store.samples.push_back(vec.basis->state(table.draw(rng)));
  } else {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      acc += p[i];
      cdf[static_cast<std::size_t>(i)] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double u = rng.uniform() * acc;
      std::size_t lo = 0, hi = cdf.size() - 1;
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cdf[mid] <= u)
          lo = mid + 1;
        else
          hi = mid;
      }
      store.samples.push_back(vec.basis->state(lo));
    }
  }
  return store;
}

}  // namespace qevmc

#endif  // QEVMC_VQE_HPP
