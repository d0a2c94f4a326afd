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

#ifndef QEVMC_SR_HPP
#define QEVMC_SR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qevmc/mcmc.hpp"
#include "qevmc/nqs.hpp"

namespace qevmc {

/**
 * Stochastic-reconfiguration hyperparameters. Each iteration draws `samples`
 * fresh chains of `chain_length` Metropolis steps from the configured
 * initial source and updates the weights from the final configurations.
 */
struct SrConfig {
  int iterations = 200;
  std::size_t samples = 5000;
  std::size_t chain_length = 15;  // 20 for 24 spins and above
  double eta = 0.05;
  double lambda0 = 100.0;
  double lambda_decay = 0.9;
  double lambda_min = 1e-4;
  double lambda_floor = 1e-8;
  std::uint64_t seed = 1;

  double lambda(int p) const {
    return std::max(lambda0 * std::pow(lambda_decay, p), lambda_min);
  }

  void validate() const {
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (samples < 2) throw std::invalid_argument("samples must be >= 2");
    if (eta <= 0.0) throw std::invalid_argument("eta must be > 0");
    if (lambda_min <= 0.0 || lambda0 <= 0.0)
      throw std::invalid_argument("regularization must be > 0");
  }
};

struct SrTrace {
  std::vector<double> energy;
  std::vector<double> sem;
  std::vector<double> relative_error;  // NaN when no reference energy given
  std::vector<double> param_norm;
};

struct SrIterationStats {
  double energy = 0.0;
  double sem = 0.0;
  double lambda_used = 0.0;
  int solve_retries = 0;
};

namespace detail {

/**
 * Solves (S + reg) x = F with S = Oc^T Oc / B given column-centred
 * log-derivatives, without forming S. Conjugate gradient to 1e-8 relative
 * residual; dense Cholesky fallback for <= 2000 parameters.
 */
inline bool solve_sr_system(const Eigen::MatrixXd &O, const Eigen::VectorXd &o_mean,
                            const Eigen::VectorXd &diag_reg, double lambda_floor,
                            const Eigen::VectorXd &F, Eigen::VectorXd &x) {
  const double B = static_cast<double>(O.rows());
  const Eigen::Index K = O.cols();
  auto apply_s = [&](const Eigen::VectorXd &v) -> Eigen::VectorXd {
    Eigen::VectorXd Ov = O * v;
    Ov.array() -= o_mean.dot(v);
    Eigen::VectorXd out = (O.transpose() * Ov) / B;
    out -= o_mean * (Ov.sum() / B);
    out += diag_reg.cwiseProduct(v);
    out += lambda_floor * v;
    return out;
  };

  x = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd r = F;
  Eigen::VectorXd p = r;
  double rs = r.squaredNorm();
  const double f_norm = F.norm();
  if (f_norm == 0.0) return true;
  const double tol2 = (1e-8 * f_norm) * (1e-8 * f_norm);
  const int max_cg = static_cast<int>(std::min<Eigen::Index>(4 * K, 4000));
  for (int it = 0; it < max_cg; ++it) {
    if (rs <= tol2) return true;
    Eigen::VectorXd Sp = apply_s(p);
    double denom = p.dot(Sp);
    if (denom <= 0.0) break;  // loss of positive definiteness
    double alpha = rs / denom;
    x += alpha * p;
    r -= alpha * Sp;
    double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  if (rs <= tol2) return true;

  if (K <= 2000) {
    Eigen::MatrixXd Oc = O.rowwise() - o_mean.transpose();
    Eigen::MatrixXd S = (Oc.transpose() * Oc) / B;
    S.diagonal() += diag_reg;
    S.diagonal().array() += lambda_floor;
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() == Eigen::Success) {
      x = llt.solve(F);
      return true;
    }
  }
  return false;
}

}  // namespace detail

/**
 * One SR update from a batch of configurations with precomputed local
 * energies: S = <OO> - <O><O>, F = <E O> - <E><O>,
 * W <- W - eta (S + lambda diag(S) + floor I)^{-1} F.
 * A failed solve raises lambda 10x, at most three times.
 */
inline SrIterationStats sr_update(NqsWF &wf, const Eigen::MatrixXd &O,
                                  const Eigen::VectorXd &e_loc, double eta,
                                  double lambda, double lambda_floor) {
  const double B = static_cast<double>(O.rows());
  Eigen::VectorXd o_mean = O.colwise().mean();
  double e_mean = e_loc.mean();
  Eigen::VectorXd F = (O.transpose() * e_loc) / B - e_mean * o_mean;
  Eigen::VectorXd diag_s =
      (O.cwiseProduct(O).colwise().mean().transpose() - o_mean.cwiseAbs2());

  SrIterationStats stats;
  stats.energy = e_mean;
  double var = e_loc.squaredNorm() / B - e_mean * e_mean;
  stats.sem = B > 1 ? std::sqrt(std::max(0.0, var) / (B - 1)) : 0.0;

  Eigen::VectorXd x;
  double lam = lambda;
  for (int attempt = 0;; ++attempt) {
    if (detail::solve_sr_system(O, o_mean, (lam * diag_s).eval(), lambda_floor,
                                F, x))
      break;
    if (attempt >= 3)
      throw std::runtime_error("SR solve failed after 3 lambda increases");
    lam *= 10.0;
    stats.solve_retries = attempt + 1;
  }
  stats.lambda_used = lam;
  wf.unpack(wf.pack() - eta * x);
  return stats;
}

/// One sampled SR iteration: fresh chains, batch statistics, weight update.
inline SrIterationStats sr_iteration(NqsWF &wf, const HamiltonianSpec &spec,
                                     const InitialSource &source,
                                     const SrConfig &config, int p) {
  ChainConfig cc;
  cc.n_chains = config.samples;
  cc.chain_length = config.chain_length;
  cc.record_energy = false;
  std::uint64_t s = config.seed;
  for (int i = 0; i <= p; ++i) splitmix64(s);
  cc.seed = s;

  FlipMixer mixer(spec.lattice.sites());
  RunResult run = run_chains(cc, wf, mixer, spec,
                             SectorConstraint::all_spins(), source);

  const std::size_t B = run.final_samples.samples.size();
  Eigen::MatrixXd O(B, wf.n_params());
  Eigen::VectorXd e_loc(B);
  for (std::size_t k = 0; k < B; ++k) {
    const BasisState &x = run.final_samples.samples[k];
    O.row(k) = wf.log_derivatives(x);
    e_loc[static_cast<Eigen::Index>(k)] =
        NqsWalker(wf, x).local_energy(spec);
  }
  return sr_update(wf, O, e_loc, config.eta, config.lambda(p),
                   config.lambda_floor);
}

/**
 * Deterministic SR step over the full enumerated distribution |psi|^2;
 * used to study the noise-free flow on small systems.
 */
inline double sr_iteration_exact(NqsWF &wf, const HamiltonianSpec &spec,
                                 const SectorBasis &basis, double eta,
                                 double lambda, double lambda_floor = 1e-8) {
  Eigen::VectorXd pdist = exact_distribution(wf, basis);
  const Eigen::Index K = wf.n_params();
  Eigen::VectorXd o_mean = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(K);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(K, K);
  double e_mean = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double w = pdist[static_cast<Eigen::Index>(k)];
    if (w == 0.0) continue;
    const BasisState &x = basis.state(k);
    Eigen::VectorXd o = wf.log_derivatives(x);
    double e = NqsWalker(wf, x).local_energy(spec);
    o_mean += w * o;
    e_mean += w * e;
    F += w * e * o;
    S.noalias() += w * (o * o.transpose());
  }
  F -= e_mean * o_mean;
  S.noalias() -= o_mean * o_mean.transpose();
  Eigen::VectorXd reg = lambda * S.diagonal();
  S.diagonal() += reg;
  S.diagonal().array() += lambda_floor;
  wf.unpack(wf.pack() - eta * S.ldlt().solve(F));
  return e_mean;
}

struct SrResult {
  SrTrace trace;
  NqsWF wf;
  double final_energy = std::numeric_limits<double>::quiet_NaN();
  double relative_error = std::numeric_limits<double>::quiet_NaN();
  bool aborted = false;
};

/**
 * Full training run. The reported energy is the mean over the last five
 * iterations; pass a finite reference energy to get relative errors.
 * Divergence (estimate rising past 10x the initial magnitude, or going
 * non-finite) aborts and returns the trace collected so far.
 */
inline SrResult train(NqsWF wf, const HamiltonianSpec &spec,
                      const InitialSource &source, const SrConfig &config,
                      double reference_energy =
                          std::numeric_limits<double>::quiet_NaN()) {
  config.validate();
  SrResult out;
  double initial_mag = std::numeric_limits<double>::quiet_NaN();
  for (int p = 0; p < config.iterations; ++p) {
    SrIterationStats it = sr_iteration(wf, spec, source, config, p);
    out.trace.energy.push_back(it.energy);
    out.trace.sem.push_back(it.sem);
    out.trace.param_norm.push_back(wf.pack().norm());
    out.trace.relative_error.push_back(
        std::isfinite(reference_energy) && reference_energy != 0.0
            ? std::abs((it.energy - reference_energy) / reference_energy)
            : std::numeric_limits<double>::quiet_NaN());
    if (p == 0) initial_mag = std::abs(it.energy);
    if (!std::isfinite(it.energy) ||
        (p > 0 && it.energy > 10.0 * std::max(1.0, initial_mag))) {
      out.aborted = true;
      break;
    }
  }
  out.wf = std::move(wf);
  const std::size_t n = out.trace.energy.size();
  if (n > 0) {
    std::size_t tail = std::min<std::size_t>(5, n);
    double s = 0.0;
    for (std::size_t k = n - tail; k < n; ++k) s += out.trace.energy[k];
    out.final_energy = s / static_cast<double>(tail);
    if (std::isfinite(reference_energy) && reference_energy != 0.0)
      out.relative_error =
          std::abs((out.final_energy - reference_energy) / reference_energy);
  }
  return out;
}

/**
 * Speedup table entry for the source-comparison study: at each attained
 * relative-error threshold, the ratio of uniform-source iterations to
 * candidate-source iterations. Thresholds one of the traces never reaches
 * are omitted.
 */
struct SourceSpeedup {
  std::string source;
  double threshold = 0.0;
  std::size_t iters_uniform = 0;
  std::size_t iters_source = 0;
  double factor = 0.0;
};

inline std::vector<SourceSpeedup> compare_sources(
    const std::vector<double> &uniform_errors,
    const std::vector<std::pair<std::string, std::vector<double>>> &candidates,
    const std::vector<double> &thresholds) {
  auto first_at = [](const std::vector<double> &err, double t) -> std::ptrdiff_t {
    for (std::size_t i = 0; i < err.size(); ++i)
      if (std::isfinite(err[i]) && err[i] <= t)
        return static_cast<std::ptrdiff_t>(i);
    return -1;
  };
  std::vector<SourceSpeedup> out;
  for (const auto &[name, errors] : candidates) {
    for (double t : thresholds) {
      std::ptrdiff_t nu = first_at(uniform_errors, t);
      std::ptrdiff_t nc = first_at(errors, t);
      if (nu < 0 || nc < 0) continue;  // unattained thresholds are omitted
      SourceSpeedup e;
      e.source = name;
      e.threshold = t;
      e.iters_uniform = static_cast<std::size_t>(nu);
      e.iters_source = static_cast<std::size_t>(nc);
      e.factor = nc == 0 ? (nu == 0 ? 1.0
                                    : std::numeric_limits<double>::infinity())
                         : static_cast<double>(nu) / static_cast<double>(nc);
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace qevmc

#endif  // QEVMC_SR_HPP
