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

#ifndef QEVMC_NQS_HPP
#define QEVMC_NQS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "qevmc/basis_state.hpp"
#include "qevmc/gutzwiller.hpp"  // LogAmplitude
#include "qevmc/lattice.hpp"
#include "qevmc/rng.hpp"

namespace qevmc {

/// Overflow-safe log(2 cosh t).
inline double log2cosh(double t) {
  double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a));
}

class NqsWalker;

/**
 * Real-weight RBM quantum state with the hidden layer traced out:
 *   ln psi(S) = sum_j a_j s_j + sum_i log(2 cosh(b_i + sum_j W_ij s_j)),
 * with s_j = +/-1. Amplitudes are strictly positive.
 */
class NqsWF {
 public:
  using Walker = NqsWalker;

  NqsWF() = default;
  NqsWF(int n, int m) : a_(Eigen::VectorXd::Zero(n)), b_(Eigen::VectorXd::Zero(m)), W_(Eigen::MatrixXd::Zero(m, n)) {}

  /// Gaussian init, standard deviation 0.01.
  static NqsWF random(int n, int m, Rng &rng, double stddev = 0.01) {
    NqsWF wf(n, m);
    for (int j = 0; j < n; ++j) wf.a_[j] = stddev * rng.normal();
    for (int i = 0; i < m; ++i) wf.b_[i] = stddev * rng.normal();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) wf.W_(i, j) = stddev * rng.normal();
    return wf;
  }

  int n_visible() const { return static_cast<int>(a_.size()); }
  int n_hidden() const { return static_cast<int>(b_.size()); }
  int n_params() const { return n_visible() + n_hidden() + n_visible() * n_hidden(); }

  Eigen::VectorXd &a() { return a_; }
  Eigen::VectorXd &b() { return b_; }
  Eigen::MatrixXd &W() { return W_; }
  const Eigen::VectorXd &a() const { return a_; }
  const Eigen::VectorXd &b() const { return b_; }
  const Eigen::MatrixXd &W() const { return W_; }

  Eigen::VectorXd spins(const BasisState &x) const {
    Eigen::VectorXd s(n_visible());
    for (int j = 0; j < n_visible(); ++j) s[j] = x.spin(j);
    return s;
  }

  double log_psi(const BasisState &x) const {
    Eigen::VectorXd s = spins(x);
    Eigen::VectorXd theta = b_ + W_ * s;
    double lp = a_.dot(s);
    for (int i = 0; i < n_hidden(); ++i) lp += log2cosh(theta[i]);
    return lp;
  }

  /// Wavefunction-interface form; NQS amplitudes are always positive.
  LogAmplitude log_amplitude(const BasisState &x) const {
    return {log_psi(x), 1};
  }

  /**
   * Log-derivatives O_k = d ln psi / d w_k at configuration x, packed in
   * the order a, b, then W row-major.
   */
  Eigen::VectorXd log_derivatives(const BasisState &x) const {
    const int n = n_visible();
    const int m = n_hidden();
    Eigen::VectorXd s = spins(x);
    Eigen::VectorXd t = (b_ + W_ * s).array().tanh();
    Eigen::VectorXd out(n_params());
    out.head(n) = s;
    out.segment(n, m) = t;
    for (int i = 0; i < m; ++i) out.segment(n + m + i * n, n) = t[i] * s;
    return out;
  }

  /// Flat parameter vector in a|b|W order, and its inverse.
  Eigen::VectorXd pack() const {
    Eigen::VectorXd out(n_params());
    out.head(n_visible()) = a_;
    out.segment(n_visible(), n_hidden()) = b_;
    for (int i = 0; i < n_hidden(); ++i)
      out.segment(n_visible() + n_hidden() + i * n_visible(), n_visible()) =
          W_.row(i);
    return out;
  }
  void unpack(const Eigen::VectorXd &w) {
    if (w.size() != n_params())
      throw std::invalid_argument("NqsWF::unpack: size mismatch");
    a_ = w.head(n_visible());
    b_ = w.segment(n_visible(), n_hidden());
    for (int i = 0; i < n_hidden(); ++i)
      W_.row(i) =
          w.segment(n_visible() + n_hidden() + i * n_visible(), n_visible());
  }

  /// Binary weight file: two text header lines, then 8-byte LE reals.
  void save(const std::string &path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "QEVMC-NQS v1\n";
    f << "N=" << n_visible() << " M=" << n_hidden() << "\n";
    Eigen::VectorXd w = pack();
    f.write(reinterpret_cast<const char *>(w.data()),
            static_cast<std::streamsize>(w.size() * sizeof(double)));
    if (!f) throw std::runtime_error("failed writing " + path);
  }

  static NqsWF load(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(f, line);
    if (line != "QEVMC-NQS v1")
      throw std::runtime_error(path + ": bad magic line '" + line + "'");
    std::getline(f, line);
    int n = -1, m = -1;
    if (std::sscanf(line.c_str(), "N=%d M=%d", &n, &m) != 2 || n <= 0 || m <= 0)
      throw std::runtime_error(path + ": bad header line '" + line + "'");
    NqsWF wf(n, m);
    Eigen::VectorXd w(wf.n_params());
    f.read(reinterpret_cast<char *>(w.data()),
           static_cast<std::streamsize>(w.size() * sizeof(double)));
    if (f.gcount() != static_cast<std::streamsize>(w.size() * sizeof(double)))
      throw std::runtime_error(path + ": truncated weight block");
    wf.unpack(w);
    return wf;
  }

 private:
  Eigen::VectorXd a_, b_;
  Eigen::MatrixXd W_;
};

/**
 * Per-chain NQS cache holding the spin vector and hidden-unit activations
 * theta = b + W s. Single-flip ratios and updates are O(M).
 */
class NqsWalker {
 public:
  struct Move {
    int site = -1;
    bool self_loop() const { return site < 0; }
  };

  NqsWalker(const NqsWF &wf, const BasisState &x) : wf_(&wf), state_(x) {
    sigma_ = wf.spins(x);
    theta_ = wf.b() + wf.W() * sigma_;
  }

  const BasisState &current() const { return state_; }

  bool zero_amplitude() const { return false; }

  LogAmplitude log_amplitude() const { return {log_psi(), 1}; }

  double log_psi() const {
    double lp = wf_->a().dot(sigma_);
    for (int i = 0; i < wf_->n_hidden(); ++i) lp += log2cosh(theta_[i]);
    return lp;
  }

  double log_abs_ratio(const Move &m) const {
    if (m.self_loop()) return 0.0;
    const int j = m.site;
    double lr = -2.0 * wf_->a()[j] * sigma_[j];
    for (int i = 0; i < wf_->n_hidden(); ++i)
      lr += log2cosh(theta_[i] - 2.0 * wf_->W()(i, j) * sigma_[j]) -
            log2cosh(theta_[i]);
    return lr;
  }

  double ratio(const Move &m) const { return std::exp(log_abs_ratio(m)); }

  void accept(const Move &m) {
    if (m.self_loop()) return;
    const int j = m.site;
    theta_ -= 2.0 * sigma_[j] * wf_->W().col(j);
    sigma_[j] = -sigma_[j];
    state_.flip(j);
  }

  /// TFI local energy: diagonal ZZ part plus -h times single-flip ratios.
  double local_energy(const HamiltonianSpec &spec) const {
    double e = tfi_diagonal(state_, spec.lattice, spec.J);
    for (int j = 0; j < wf_->n_visible(); ++j) e -= spec.h * ratio(Move{j});
    return e;
  }

  double cache_drift() const {
    return std::abs(log_psi() - wf_->log_psi(state_));
  }

 private:
  const NqsWF *wf_;
  BasisState state_;
  Eigen::VectorXd sigma_, theta_;
};

}  // namespace qevmc

#endif  // QEVMC_NQS_HPP
