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

#ifndef QEVMC_MCMC_HPP
#define QEVMC_MCMC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qevmc/mixer.hpp"
#include "qevmc/samples.hpp"
#include "qevmc/slater.hpp"

namespace qevmc {

/**
 * Source of initial configurations for the chains: uniform over the sector,
 * direct Slater sampling, draws from a sample store, or inverse-CDF draws
 * from an exact distribution over an enumerable basis.
 */
class InitialSource {
 public:
  static InitialSource uniform() { return InitialSource{}; }

  static InitialSource slater(const SlaterDeterminant &sd) {
    InitialSource s;
    s.sd_ = &sd;
    return s;
  }

  static InitialSource store(const SampleStore &st) {
    InitialSource s;
    s.store_ = &st;
    return s;
  }

  static InitialSource exact(const Eigen::VectorXd &probs,
                             const SectorBasis &basis) {
    InitialSource s;
    s.basis_ = &basis;
    s.cdf_.resize(probs.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      s.cdf_[i] = acc;
    }
    return s;
  }

  const char *name() const {
    if (sd_) return "slater";
    if (store_) return "sample-store";
    if (basis_) return "exact-vector";
    return "uniform";
  }

  BasisState draw(Model model, int sites, const SectorConstraint &constraint,
                  Rng &rng) const {
    if (sd_) return sample_slater(*sd_, rng);
    if (store_) {
      if (store_->samples.empty())
        throw std::runtime_error("initial sample store is empty");
      return store_->samples[rng.uniform_index(store_->samples.size())];
    }
    if (basis_) {
      double u = rng.uniform() * cdf_.back();
      std::size_t lo = 0, hi = cdf_.size() - 1;
      while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (cdf_[mid] <= u)
          lo = mid + 1;
        else
          hi = mid;
      }
      return basis_->state(lo);
    }
    return uniform_sector_sample(model, sites, constraint, rng);
  }

 private:
  const SlaterDeterminant *sd_ = nullptr;
  const SampleStore *store_ = nullptr;
  const SectorBasis *basis_ = nullptr;
  std::vector<double> cdf_;
};

struct ChainConfig {
  std::size_t n_chains = 1000;
  std::size_t chain_length = 100;
  std::size_t burn_in = 0;      // steps before energy recording starts
  std::size_t thinning = 1;     // checkpoint interval for the energy trace
  std::uint64_t seed = 1;
  bool record_energy = true;

  void validate() const {
    if (n_chains < 1) throw std::invalid_argument("n_chains must be >= 1");
    if (thinning < 1) throw std::invalid_argument("thinning must be >= 1");
  }
};

struct EnergyTrace {
  std::vector<std::size_t> steps;
  std::vector<double> mean_energy;
  std::vector<double> sem;
  /// Mean acceptance over non-self-loop proposals up to each checkpoint step.
  std::vector<double> acceptance;
  /// Fraction of proposals that were hop self-loops (invalid bonds).
  double self_loop_fraction = 0.0;
  std::size_t zero_amplitude_restarts = 0;
};

struct RunResult {
  EnergyTrace trace;
  SampleStore final_samples;
  /// Per-step acceptance curve averaged over chains (non-self proposals).
  std::vector<double> acceptance_curve;
};

namespace detail {

template <typename Walker, typename Mixer>
bool metropolis_step(Walker &walker, const Mixer &mixer, Rng &rng,
                     bool &was_self_loop) {
  auto move = mixer.propose(walker.current(), rng);
  was_self_loop = move.self_loop();
  if (was_self_loop) return false;
  double lr = walker.log_abs_ratio(move);
  if (lr == -std::numeric_limits<double>::infinity()) return false;  // auto-reject
  // Symmetric proposals: accept with min{1, p(y)/p(x)} = min{1, ratio^2}.
  if (2.0 * lr >= 0.0 || std::log(rng.uniform()) < 2.0 * lr) {
    walker.accept(move);
    return true;
  }
  return false;
}

}  // namespace detail

/**
 * Runs n_chains independent Metropolis-Hastings chains and aggregates the
 * local-energy trace, acceptance statistics, and the last states.
 *
 * WF must provide a nested Walker type constructible from (wf, state) with
 * current(), log_abs_ratio(move), accept(move), local_energy(spec) and
 * zero_amplitude().
 */
template <typename WF, typename Mixer>
RunResult run_chains(const ChainConfig &config, const WF &wf,
                     const Mixer &mixer, const HamiltonianSpec &spec,
                     const SectorConstraint &constraint,
                     const InitialSource &source) {
  config.validate();
  using Walker = typename WF::Walker;
  const int sites = spec.lattice.sites();
  const Model model = spec.lattice.model;

  const std::size_t n_checkpoints =
      config.record_energy ? config.chain_length / config.thinning + 1 : 0;
  std::vector<double> e_sum(n_checkpoints, 0.0), e_sq(n_checkpoints, 0.0);
  std::vector<double> acc_num(config.chain_length, 0.0),
      acc_den(config.chain_length, 0.0);
  std::size_t self_loops = 0, total_proposals = 0, zero_restarts = 0;

  RunResult out;
  out.final_samples.model = model;
  out.final_samples.rows = spec.lattice.rows;
  out.final_samples.cols = spec.lattice.cols;
  out.final_samples.constraint = constraint;
  out.final_samples.source = "vmc";
  out.final_samples.seed = config.seed;

  for (std::size_t chain = 0; chain < config.n_chains; ++chain) {
    Rng rng(config.seed, chain);
    std::optional<Walker> walker;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      BasisState x0 = source.draw(model, sites, constraint, rng);
      walker.emplace(wf, x0);
      if (!walker->zero_amplitude()) break;
      walker.reset();
      ++zero_restarts;
    }
    if (!walker)
      throw std::runtime_error(
          "initial source exhausted: could not find a nonzero-amplitude seed");

    auto checkpoint = [&](std::size_t step) {
      if (!config.record_energy || step < config.burn_in) return;
      if (step % config.thinning != 0) return;
      std::size_t k = step / config.thinning;
      double e = walker->local_energy(spec);
      e_sum[k] += e;
      e_sq[k] += e * e;
    };

    checkpoint(0);
    for (std::size_t step = 0; step < config.chain_length; ++step) {
      bool self_loop = false;
      bool accepted = detail::metropolis_step(*walker, mixer, rng, self_loop);
      ++total_proposals;
      if (self_loop) {
        ++self_loops;
      } else {
        acc_den[step] += 1.0;
        if (accepted) acc_num[step] += 1.0;
      }
      checkpoint(step + 1);
    }
    out.final_samples.samples.push_back(walker->current());
  }

  EnergyTrace &tr = out.trace;
  for (std::size_t k = 0; k < n_checkpoints; ++k) {
    std::size_t step = k * config.thinning;
    if (step < config.burn_in) continue;
    double n = static_cast<double>(config.n_chains);
    double mean = e_sum[k] / n;
    double var = e_sq[k] / n - mean * mean;
    tr.steps.push_back(step);
    tr.mean_energy.push_back(mean);
    tr.sem.push_back(n > 1 ? std::sqrt(std::max(0.0, var) / (n - 1)) : 0.0);
  }
  double acc_cum_num = 0.0, acc_cum_den = 0.0;
  out.acceptance_curve.resize(config.chain_length);
  for (std::size_t step = 0; step < config.chain_length; ++step) {
    out.acceptance_curve[step] =
        acc_den[step] > 0 ? acc_num[step] / acc_den[step] : 0.0;
    acc_cum_num += acc_num[step];
    acc_cum_den += acc_den[step];
  }
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    std::size_t step = tr.steps[k];
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < step; ++s) {
      num += acc_num[s];
      den += acc_den[s];
    }
    tr.acceptance.push_back(den > 0 ? num / den : 0.0);
  }
  tr.self_loop_fraction =
      total_proposals > 0
          ? static_cast<double>(self_loops) / static_cast<double>(total_proposals)
          : 0.0;
  tr.zero_amplitude_restarts = zero_restarts;
  return out;
}

/// Per-step mean acceptance of a run, values in [0, 1].
inline const std::vector<double> &acceptance_curve(const RunResult &r) {
  return r.acceptance_curve;
}

}  // namespace qevmc

#endif  // QEVMC_MCMC_HPP
