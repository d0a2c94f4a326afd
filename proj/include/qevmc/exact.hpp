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

#ifndef QEVMC_EXACT_HPP
#define QEVMC_EXACT_HPP

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qevmc/rng.hpp"
#include "qevmc/sector_basis.hpp"
#include "qevmc/sparse.hpp"

namespace qevmc {

using Complex = std::complex<double>;

/// Amplitudes over a sector basis. The basis pointer is optional and only
/// used by code that needs configuration lookups.
struct StateVector {
  Eigen::VectorXcd amplitudes;
  const SectorBasis *basis = nullptr;

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  void normalize() { amplitudes /= amplitudes.norm(); }

  /// Measurement distribution |amp|^2.
  Eigen::VectorXd probabilities() const {
    return amplitudes.cwiseAbs2();
  }
};

namespace detail {

template <typename Op>
struct LanczosResult {
  double energy = 0.0;
  Eigen::VectorXd vector;
  double residual = std::numeric_limits<double>::infinity();
};

/// Restarted Lanczos with full reorthogonalisation inside each cycle.
template <typename Op>
LanczosResult<Op> lanczos_ground(const Op &op, std::size_t dim, int block,
                                 int max_cycles, double tol,
                                 std::uint64_t seed) {
  LanczosResult<Op> out;
  Rng rng(seed, 0xED);
  Eigen::VectorXd v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.normal();
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  Eigen::VectorXd w(dim);
  for (int cycle = 0; cycle < max_cycles; ++cycle) {
    basis.clear();
    basis.push_back(v);
    std::vector<double> alpha, beta;
    int m = 0;
    for (int j = 0; j < block; ++j) {
      op.apply(basis[j], w);
      double a = basis[j].dot(w);
      alpha.push_back(a);
      w -= a * basis[j];
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      // full reorthogonalisation
      for (const auto &u : basis) w -= u.dot(w) * u;
      double b = w.norm();
      m = j + 1;
      if (b < 1e-12) break;
      beta.push_back(b);
      if (j + 1 < block) basis.push_back(w / b);
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alpha[j];
      if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::VectorXd c = es.eigenvectors().col(0);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(dim);
    for (int j = 0; j < m; ++j) y += c[j] * basis[j];
    y.normalize();
    op.apply(y, w);
    double theta = y.dot(w);
    double res = (w - theta * y).norm();
    out.energy = theta;
    out.vector = y;
    out.residual = res;
    if (res <= tol) return out;
    v = y;
  }
  return out;
}

struct SparseOpAdapter {
  const SparseOperator *op;
  void apply(const Eigen::VectorXd &x, Eigen::VectorXd &y) const {
    op->apply(x, y);
  }
};

}  // namespace detail

/**
 * Lowest eigenpair of a Hermitian operator. Dense solve for dim <= 4096,
 * restarted Lanczos above. Residual ||Hv - Ev|| <= 1e-8 or throws.
 */
inline std::pair<double, StateVector> ground_state(
    const SparseOperator &op, const SectorBasis *basis = nullptr,
    std::uint64_t seed = 7) {
  const std::size_t dim = op.dim();
  StateVector vec;
  vec.basis = basis;
  if (dim <= 4096) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
    vec.amplitudes = es.eigenvectors().col(0).cast<Complex>();
    return {es.eigenvalues()[0], vec};
  }
  detail::SparseOpAdapter a{&op};
  auto r = detail::lanczos_ground(a, dim, 50, 200, 1e-8, seed);
  if (r.residual > 1e-8)
    throw std::runtime_error("ground_state: Lanczos did not converge");
  vec.amplitudes = r.vector.cast<Complex>();
  return {r.energy, vec};
}

/// Ground energy/vector of any matrix-free Hermitian operator.
template <typename Op>
std::pair<double, Eigen::VectorXd> ground_state_matrix_free(
    const Op &op, std::size_t dim, int block = 30, std::uint64_t seed = 7,
    double tol = 1e-8) {
  auto r = detail::lanczos_ground(op, dim, block, 400, tol, seed);
  if (r.residual > tol)
    throw std::runtime_error("ground_state_matrix_free: no convergence");
  return {r.energy, r.vector};
}

/// <vec|op|vec> for a Hermitian operator (imaginary part checked).
inline double expectation(const SparseOperator &op, const StateVector &vec) {
  if (op.dim() != vec.dim())
    throw std::invalid_argument("expectation: dim mismatch");
  Eigen::VectorXcd w;
  op.apply(vec.amplitudes, w);
  Complex e = vec.amplitudes.dot(w);
  return e.real();
}

namespace detail {

inline Eigen::VectorXcd krylov_expm_step(const SparseOperator &op, double theta,
                                         const Eigen::VectorXcd &v, int m,
                                         double &err_estimate) {
  const double nrm = v.norm();
  std::vector<Eigen::VectorXcd> basis;
  basis.push_back(v / nrm);
  std::vector<double> alpha, beta;
  Eigen::VectorXcd w;
  int k = 0;
  for (int j = 0; j < m; ++j) {
    op.apply(basis[j], w);
    double a = std::real(basis[j].dot(w));
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    for (const auto &u : basis) w -= u.dot(w) * u;
    double b = w.norm();
    k = j + 1;
    if (b < 1e-14) break;
    beta.push_back(b);
    if (j + 1 < m) basis.push_back(w / b);
  }
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    T(j, j) = alpha[j];
    if (j + 1 < k) T(j, j + 1) = T(j + 1, j) = beta[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  Eigen::VectorXcd phases(k);
  for (int j = 0; j < k; ++j)
    phases[j] = std::exp(Complex(0.0, -theta * es.eigenvalues()[j]));
  Eigen::VectorXcd u =
      es.eigenvectors().cast<Complex>() *
      (phases.array() * es.eigenvectors().row(0).transpose().cast<Complex>().array())
          .matrix();
  err_estimate = (k == static_cast<int>(basis.size()) && k == m)
                     ? std::abs(u[k - 1])
                     : 0.0;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int j = 0; j < k; ++j) out += u[j] * basis[j];
  return out * nrm;
}

}  // namespace detail

/**
 * e^{-i theta op} vec. Uses the exact elementwise phase when op is diagonal,
 * Krylov (dim 30, adaptive theta splitting) otherwise. Norm preserved to 1e-9.
 */
inline StateVector evolve(const SparseOperator &op, double theta,
                          const StateVector &vec) {
  if (op.dim() != vec.dim())
    throw std::invalid_argument("evolve: dim mismatch");
  StateVector out;
  out.basis = vec.basis;
  if (theta == 0.0) {
    out.amplitudes = vec.amplitudes;
    return out;
  }
  if (op.is_diagonal()) {
    Eigen::VectorXd d = op.diagonal();
    out.amplitudes.resize(vec.amplitudes.size());
    for (Eigen::Index i = 0; i < d.size(); ++i)
      out.amplitudes[i] =
          vec.amplitudes[i] * std::exp(Complex(0.0, -theta * d[i]));
    return out;
  }
  constexpr int kKrylovDim = 30;
  constexpr double kTol = 1e-9;
  Eigen::VectorXcd cur = vec.amplitudes;
  int substeps = 1;
  for (; substeps <= 1024; substeps *= 2) {
    Eigen::VectorXcd trial = cur;
    double worst = 0.0;
    bool ok = true;
    for (int s = 0; s < substeps; ++s) {
      double err = 0.0;
      trial = detail::krylov_expm_step(op, theta / substeps, trial, kKrylovDim,
                                       err);
      worst = std::max(worst, err);
      if (worst > kTol) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.amplitudes = trial;
      double n = out.amplitudes.norm();
      if (std::abs(n - vec.amplitudes.norm()) > 1e-6)
        throw std::runtime_error("evolve: Krylov norm drift");
      return out;
    }
  }
  throw std::runtime_error("evolve: Krylov did not converge");
}

/**
 * In-place e^{-i theta sum_j X_j} on a full 2^n spin register: a product of
 * commuting single-qubit rotations applied exactly.
 */
inline void apply_transverse_rotation(Eigen::VectorXcd &amps, int n,
                                      double theta) {
  const Complex c(std::cos(theta), 0.0);
  const Complex s(0.0, -std::sin(theta));
  for (int q = 0; q < n; ++q) {
    const std::size_t stride = 1ULL << q;
    for (std::size_t base = 0; base < static_cast<std::size_t>(amps.size());
         base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        Complex a0 = amps[i];
        Complex a1 = amps[i + stride];
        amps[i] = c * a0 + s * a1;
        amps[i + stride] = s * a0 + c * a1;
      }
    }
  }
}

}  // namespace qevmc

#endif  // QEVMC_EXACT_HPP
