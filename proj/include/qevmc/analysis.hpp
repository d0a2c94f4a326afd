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

#ifndef QEVMC_ANALYSIS_HPP
#define QEVMC_ANALYSIS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qevmc/exact.hpp"
#include "qevmc/gutzwiller.hpp"
#include "qevmc/mixer.hpp"
#include "qevmc/sparse.hpp"

namespace qevmc {

/// Total variation distance, 1/2 sum |nu - pi|.
inline double tvd(const Eigen::VectorXd &nu, const Eigen::VectorXd &pi) {
  if (nu.size() != pi.size()) throw std::invalid_argument("tvd: dim mismatch");
  return 0.5 * (nu - pi).lpNorm<1>();
}

/// L1 distance sum |nu - pi| (= 2 TVD); both conventions are reported.
inline double l1_distance(const Eigen::VectorXd &nu, const Eigen::VectorXd &pi) {
  return (nu - pi).lpNorm<1>();
}

/**
 * chi^2 divergence sum nu^2/pi - 1. Support violations (nu > 0 where
 * pi = 0) yield +infinity.
 */
inline double chi_squared(const Eigen::VectorXd &nu, const Eigen::VectorXd &pi) {
  if (nu.size() != pi.size())
    throw std::invalid_argument("chi_squared: dim mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (pi[i] <= 0.0) {
      if (nu[i] > 0.0) return std::numeric_limits<double>::infinity();
      continue;
    }
    s += nu[i] * nu[i] / pi[i];
  }
  return s - 1.0;
}

/// Classical fidelity sum sqrt(nu pi) of the amplitude states |sqrt(nu)>.
inline double bhattacharyya(const Eigen::VectorXd &nu,
                            const Eigen::VectorXd &pi) {
  double f = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i)
    f += std::sqrt(std::max(0.0, nu[i]) * std::max(0.0, pi[i]));
  return f;
}

/// Site count backed out of the basis (Hubbard width 2L, TFI width N).
inline int lattice_sites(const SectorBasis &basis) {
  return basis.constraint().kind == SectorConstraint::Kind::kFixedFill
             ? basis.width() / 2
             : basis.width();
}

/**
 * Exact Metropolis kernel over the support of the target distribution.
 * Zero-amplitude states are excluded and reported; rows sum to 1 exactly
 * (the diagonal absorbs the rejected mass via compensated summation).
 */
struct TransitionMatrix {
  SparseOperator M;               // row-stochastic, over support states
  Eigen::VectorXd pi;             // stationary distribution on the support
  std::vector<std::size_t> support;  // support index -> full basis index
  std::size_t excluded = 0;       // number of zero-probability states dropped
};

template <typename WF, typename Mixer>
TransitionMatrix transition_matrix(const WF &wf, const Mixer &mixer,
                                   const SectorBasis &basis) {
  if (basis.size() > (1ULL << 20))
    throw std::invalid_argument("transition_matrix: basis larger than 2^20");
  Eigen::VectorXd p = exact_distribution(wf, basis);

  TransitionMatrix out;
  std::vector<std::ptrdiff_t> to_support(basis.size(), -1);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (p[static_cast<Eigen::Index>(k)] > 0.0) {
      to_support[k] = static_cast<std::ptrdiff_t>(out.support.size());
      out.support.push_back(k);
    }
  out.excluded = basis.size() - out.support.size();
  const std::size_t dim = out.support.size();
  out.pi.resize(dim);
  for (std::size_t s = 0; s < dim; ++s)
    out.pi[static_cast<Eigen::Index>(s)] =
        p[static_cast<Eigen::Index>(out.support[s])];
  out.pi /= out.pi.sum();

  out.M = SparseOperator(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    const BasisState &x = basis.state(out.support[s]);
    double px = out.pi[static_cast<Eigen::Index>(s)];
    // Kahan-compensated accumulation of the off-diagonal mass.
    double off = 0.0, comp = 0.0;
    for (auto &[move, prob] : mixer.proposals(x)) {
      if (move.self_loop()) continue;
      BasisState y = Mixer::apply(x, move, lattice_sites(basis));
      std::size_t full = basis.index(y);
      if (to_support[full] < 0) continue;  // zero-amplitude target: rejected
      std::size_t t = static_cast<std::size_t>(to_support[full]);
      double py = out.pi[static_cast<Eigen::Index>(t)];
      double a = prob * std::min(1.0, py / px);
      if (a == 0.0) continue;
      out.M.add(s, t, a);
      double yk = a - comp;
      double tk = off + yk;
      comp = (tk - off) - yk;
      off = tk;
    }
    out.M.add(s, s, 1.0 - off);
  }
  out.M.finalize();
  return out;
}

/// nu_{i+1} = nu_i M trajectory; asserts each iterate stays normalised.
inline std::vector<Eigen::VectorXd> evolve_distribution(const SparseOperator &M,
                                                        const Eigen::VectorXd &nu0,
                                                        std::size_t steps) {
  if (static_cast<std::size_t>(nu0.size()) != M.dim())
    throw std::invalid_argument("evolve_distribution: dim mismatch");
  std::vector<Eigen::VectorXd> traj;
  traj.reserve(steps + 1);
  traj.push_back(nu0);
  for (std::size_t i = 0; i < steps; ++i) {
    Eigen::VectorXd next = M.apply_transpose(traj.back());
    if (std::abs(next.sum() - 1.0) > 1e-12)
      throw std::runtime_error("evolve_distribution: normalisation drift");
    traj.push_back(std::move(next));
  }
  return traj;
}

/// TVD(nu_n, pi) for n = 0..steps without storing the trajectory.
inline std::vector<double> tvd_trajectory(const SparseOperator &M,
                                          Eigen::VectorXd nu,
                                          const Eigen::VectorXd &pi,
                                          std::size_t steps) {
  std::vector<double> out;
  out.reserve(steps + 1);
  out.push_back(tvd(nu, pi));
  for (std::size_t i = 0; i < steps; ++i) {
    nu = M.apply_transpose(nu);
    out.push_back(tvd(nu, pi));
  }
  return out;
}

/// Max detailed-balance violation max_{x,y} |pi_x M_xy - pi_y M_yx|.
inline double detailed_balance_violation(const SparseOperator &M,
                                         const Eigen::VectorXd &pi) {
  double worst = 0.0;
  for (std::size_t r = 0; r < M.dim(); ++r) {
    auto row = M.row(r);
    for (std::size_t k = 0; k < row.size; ++k) {
      std::size_t c = row.cols[k];
      double fwd = pi[static_cast<Eigen::Index>(r)] * row.vals[k];
      double bwd = pi[static_cast<Eigen::Index>(c)] * M.entry(c, r);
      worst = std::max(worst, std::abs(fwd - bwd));
    }
  }
  return worst;
}

inline double max_row_sum_error(const SparseOperator &M) {
  double worst = 0.0;
  for (std::size_t r = 0; r < M.dim(); ++r) {
    auto row = M.row(r);
    double s = 0.0;
    for (std::size_t k = 0; k < row.size; ++k) s += row.vals[k];
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

/**
 * Second largest eigenvalue of a reversible kernel, computed on the
 * pi-symmetrised matrix D^{1/2} M D^{-1/2}. Dense for dim <= 4096,
 * deflated Lanczos above.
 */
inline double lambda2(const SparseOperator &M, const Eigen::VectorXd &pi) {
  const std::size_t dim = M.dim();
  Eigen::VectorXd sq = pi.cwiseSqrt();
  if (dim <= 4096) {
    Eigen::MatrixXd S = M.dense();
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        S(r, c) *= sq[static_cast<Eigen::Index>(r)] /
                   sq[static_cast<Eigen::Index>(c)];
    S = 0.5 * (S + S.transpose());  // symmetrise roundoff
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    return es.eigenvalues()[dim - 2];
  }
  // Largest eigenvalue of S = D^{1/2} M D^{-1/2} deflated by the known top
  // eigenvector sqrt(pi); negated so the Lanczos minimiser finds it.
  struct Deflated {
    const SparseOperator *M;
    Eigen::VectorXd sq, inv_sq, top;
    void apply(const Eigen::VectorXd &x, Eigen::VectorXd &y) const {
      Eigen::VectorXd mz;
      M->apply(Eigen::VectorXd(x.cwiseProduct(inv_sq)), mz);
      y = mz.cwiseProduct(sq);
      y -= top.dot(y) * top;
      y = -y;
    }
  } op;
  op.M = &M;
  op.sq = sq;
  op.inv_sq = sq.cwiseInverse();
  op.top = sq / sq.norm();
  auto r = detail::lanczos_ground(op, dim, 40, 200, 1e-9, 11);
  return -r.energy;
}

struct BoundEntry {
  std::size_t n = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};

/**
 * Checks the chi^2 mixing bound 4 TVD(nu_n, pi)^2 <= lambda2^n chi^2(nu0, pi)
 * for every n up to `steps`. Requires a reversible kernel. Both TVD and L1
 * conventions of the left side are recorded; the asserted form uses TVD.
 */
struct MixingBoundLedger {
  double lambda2 = 0.0;
  double chi2_initial = 0.0;
  std::vector<BoundEntry> entries;     // lhs = 4 TVD^2
  std::vector<double> lhs_l1;          // 4 (2 TVD)^2, for reference
  bool violated = false;
  double worst_slack = std::numeric_limits<double>::infinity();
};

inline MixingBoundLedger check_mixing_bound(
    const SparseOperator &M, const Eigen::VectorXd &nu0,
    const Eigen::VectorXd &pi, std::size_t steps,
    double lambda2_hint = std::numeric_limits<double>::quiet_NaN()) {
  if (detailed_balance_violation(M, pi) > 1e-10)
    throw std::invalid_argument("check_mixing_bound: kernel not reversible");
  MixingBoundLedger ledger;
  ledger.lambda2 =
      std::isfinite(lambda2_hint) ? lambda2_hint : lambda2(M, pi);
  ledger.chi2_initial = chi_squared(nu0, pi);
  Eigen::VectorXd nu = nu0;
  double lam_pow = 1.0;
  for (std::size_t n = 0; n <= steps; ++n) {
    double t = tvd(nu, pi);
    BoundEntry e;
    e.n = n;
    e.lhs = 4.0 * t * t;
    e.rhs = lam_pow * ledger.chi2_initial;
    e.slack = e.rhs - e.lhs;
    ledger.entries.push_back(e);
    ledger.lhs_l1.push_back(4.0 * (2.0 * t) * (2.0 * t));
    ledger.worst_slack = std::min(ledger.worst_slack, e.slack);
    if (e.slack < -1e-10) ledger.violated = true;
    if (n < steps) {
      nu = M.apply_transpose(nu);
      lam_pow *= ledger.lambda2;
    }
  }
  return ledger;
}

/// chi^2(nu, pi) >= 1/<sqrt(nu)|sqrt(pi)>^2 - 1 (fidelity lower bound).
struct FidelityBoundEntry {
  double chi2 = 0.0;
  double fidelity = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};

inline FidelityBoundEntry check_fidelity_bound(const Eigen::VectorXd &nu,
                                               const Eigen::VectorXd &pi) {
  FidelityBoundEntry e;
  e.chi2 = chi_squared(nu, pi);
  e.fidelity = bhattacharyya(nu, pi);
  e.bound = e.fidelity > 0.0 ? 1.0 / (e.fidelity * e.fidelity) - 1.0
                             : std::numeric_limits<double>::infinity();
  e.slack = e.chi2 - e.bound;
  return e;
}

/**
 * Speedup curve: for each TVD target, the ratio n_a(t) / n_b(t) of the first
 * steps at which each trajectory reaches the target. Source a is the
 * classical baseline, so factors above 1 favour source b. Targets missed by
 * either trajectory are omitted.
 */
struct SpeedupPoint {
  double target = 0.0;
  std::size_t steps_baseline = 0;
  std::size_t steps_candidate = 0;
  double factor = 0.0;
};

inline std::vector<SpeedupPoint> speedup_factor(
    const std::vector<double> &tvd_baseline,
    const std::vector<double> &tvd_candidate,
    const std::vector<double> &targets) {
  auto first_step_at = [](const std::vector<double> &tr, double t)
      -> std::ptrdiff_t {
    for (std::size_t n = 0; n < tr.size(); ++n)
      if (tr[n] <= t) return static_cast<std::ptrdiff_t>(n);
    return -1;
  };
  std::vector<SpeedupPoint> out;
  for (double t : targets) {
    std::ptrdiff_t na = first_step_at(tvd_baseline, t);
    std::ptrdiff_t nb = first_step_at(tvd_candidate, t);
    if (na < 0 || nb < 0) continue;
    SpeedupPoint p;
    p.target = t;
    p.steps_baseline = static_cast<std::size_t>(na);
    p.steps_candidate = static_cast<std::size_t>(nb);
    p.factor = nb == 0 ? (na == 0 ? 1.0 : std::numeric_limits<double>::infinity())
                       : static_cast<double>(na) / static_cast<double>(nb);
    out.push_back(p);
  }
  return out;
}

/// Exact <psi_V|H|psi_V> of a simulated state; this is generally not the
/// step-0 local-energy average of the sampled distribution.
inline double vqe_energy_reference(const SparseOperator &H,
                                   const StateVector &vec) {
  return expectation(H, vec);
}

}  // namespace qevmc

#endif  // QEVMC_ANALYSIS_HPP
