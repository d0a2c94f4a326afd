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

#ifndef QEVMC_PRESETS_HPP
#define QEVMC_PRESETS_HPP

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qevmc/analysis.hpp"
#include "qevmc/config.hpp"
#include "qevmc/gutzwiller.hpp"
#include "qevmc/nqs.hpp"
#include "qevmc/sr.hpp"
#include "qevmc/vqe.hpp"

namespace qevmc {

/// Exact variational-energy grid scan for the Gutzwiller parameter.
inline double optimal_gutzwiller_c(const HamiltonianSpec &spec,
                                   const SectorBasis &basis,
                                   const SparseOperator &H, double lo = 0.0,
                                   double hi = 1.0, double step = 0.001) {
  SlaterDeterminant sd(spec.lattice, basis.constraint().n_up,
                       basis.constraint().n_down);
  double best_c = lo;
  double best_e = std::numeric_limits<double>::infinity();
  for (double c = lo; c <= hi + 0.5 * step; c += step) {
    GutzwillerWF wf(c, sd);
    double e = exact_variational_energy(wf, H, basis);
    if (e < best_e) {
      best_e = e;
      best_c = c;
    }
  }
  return best_c;
}

/// Empirical distribution of a sample store over an enumerable basis.
inline Eigen::VectorXd store_distribution(const SampleStore &store,
                                          const SectorBasis &basis) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(basis.size());
  for (const auto &x : store.samples)
    p[static_cast<Eigen::Index>(basis.index(x))] += 1.0;
  return p / p.sum();
}

/// Local energies of every basis state under a walker-capable wavefunction.
template <typename WF>
Eigen::VectorXd local_energies(const WF &wf, const HamiltonianSpec &spec,
                               const SectorBasis &basis) {
  using Walker = typename WF::Walker;
  Eigen::VectorXd e(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    e[static_cast<Eigen::Index>(k)] =
        Walker(wf, basis.state(k)).local_energy(spec);
  return e;
}

struct NamedDist {
  std::string name;
  Eigen::VectorXd nu0;  // over the full basis
  double vqe_energy = std::numeric_limits<double>::quiet_NaN();
};

struct EnumSourceReport {
  std::string name;
  double chi2 = 0.0;           // vs pi on the full basis (inf on violations)
  double chi2_support = 0.0;   // after restriction to the chain's support
  double excluded_mass = 0.0;  // nu0 mass on zero-amplitude states
  FidelityBoundEntry fidelity;
  MixingBoundLedger ledger;
  std::vector<double> tvd;     // per step, support convention
  std::vector<double> energy;  // nu_n . E_loc per step
  double vqe_energy = std::numeric_limits<double>::quiet_NaN();
};

/**
 * Full exact mixing study on an enumerable chain: transition matrix, spectrum,
 * bound ledgers, TVD and projected-energy trajectories for every source.
 */
struct EnumStudyReport {
  TransitionMatrix tm;
  Eigen::VectorXd pi_full;      // target distribution on the full basis
  Eigen::VectorXd e_loc;        // local energies on the support
  double lambda2 = 0.0;
  double tau = 0.0;
  double db_violation = 0.0;
  double row_sum_error = 0.0;
  double target_energy = 0.0;   // <psi|H|psi>/<psi|psi> of the chain target
  double ground_energy = 0.0;
  std::string baseline;
  std::vector<EnumSourceReport> sources;

  const EnumSourceReport &source(const std::string &name) const {
    for (const auto &s : sources)
      if (s.name == name) return s;
    throw std::out_of_range("no source named " + name);
  }

  std::vector<SpeedupPoint> speedup(const std::string &candidate,
                                    const std::vector<double> &targets) const {
    return speedup_factor(source(baseline).tvd, source(candidate).tvd, targets);
  }
};

template <typename WF, typename Mixer>
EnumStudyReport run_enum_study(const WF &wf, const Mixer &mixer,
                               const HamiltonianSpec &spec,
                               const SectorBasis &basis,
                               const SparseOperator &H,
                               std::vector<NamedDist> sources,
                               std::size_t steps, const std::string &baseline) {
  EnumStudyReport rep;
  rep.baseline = baseline;
  rep.tm = transition_matrix(wf, mixer, basis);
  rep.pi_full = exact_distribution(wf, basis);
  rep.lambda2 = lambda2(rep.tm.M, rep.tm.pi);
  rep.tau = 1.0 / (1.0 - rep.lambda2);
  rep.db_violation = detailed_balance_violation(rep.tm.M, rep.tm.pi);
  rep.row_sum_error = max_row_sum_error(rep.tm.M);
  rep.target_energy = exact_variational_energy(wf, H, basis);
  rep.ground_energy = ground_state(H).first;

  rep.e_loc.resize(rep.tm.support.size());
  {
    using Walker = typename WF::Walker;
    for (std::size_t s = 0; s < rep.tm.support.size(); ++s)
      rep.e_loc[static_cast<Eigen::Index>(s)] =
          Walker(wf, basis.state(rep.tm.support[s])).local_energy(spec);
  }

  for (auto &src : sources) {
    EnumSourceReport r;
    r.name = src.name;
    r.vqe_energy = src.vqe_energy;
    r.chi2 = chi_squared(src.nu0, rep.pi_full);
    r.fidelity = check_fidelity_bound(src.nu0, rep.pi_full);

    // Chains only live on the support of pi; mass on excluded states is
    // re-drawn in the samplers, which is a renormalized restriction here.
    Eigen::VectorXd nu(rep.tm.support.size());
    for (std::size_t s = 0; s < rep.tm.support.size(); ++s)
      nu[static_cast<Eigen::Index>(s)] =
          src.nu0[static_cast<Eigen::Index>(rep.tm.support[s])];
    r.excluded_mass = 1.0 - nu.sum();
    if (nu.sum() <= 0.0)
      throw std::runtime_error("source " + src.name +
                               " has no mass on the chain support");
    nu /= nu.sum();
    r.chi2_support = chi_squared(nu, rep.tm.pi);
    r.ledger = check_mixing_bound(rep.tm.M, nu, rep.tm.pi, steps, rep.lambda2);

    Eigen::VectorXd cur = nu;
    for (std::size_t n = 0; n <= steps; ++n) {
      r.tvd.push_back(tvd(cur, rep.tm.pi));
      r.energy.push_back(cur.dot(rep.e_loc));
      if (n < steps) cur = rep.tm.M.apply_transpose(cur);
    }
    rep.sources.push_back(std::move(r));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// File emission
// ---------------------------------------------------------------------------

inline void write_csv(const std::string &path,
                      const std::vector<std::string> &header,
                      const std::vector<std::vector<double>> &columns) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t c = 0; c < header.size(); ++c)
    f << header[c] << (c + 1 < header.size() ? ',' : '\n');
  std::size_t n = columns.empty() ? 0 : columns[0].size();
  f.precision(12);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < columns.size(); ++c)
      f << columns[c][r] << (c + 1 < columns.size() ? ',' : '\n');
  if (!f) throw std::runtime_error("failed writing " + path);
}

inline void write_trace_csv(const std::string &path, const EnergyTrace &tr,
                            double reference_energy =
                                std::numeric_limits<double>::quiet_NaN()) {
  std::vector<std::string> header = {"step", "mean_energy", "sem", "acceptance"};
  std::vector<std::vector<double>> cols(4);
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    cols[0].push_back(static_cast<double>(tr.steps[k]));
    cols[1].push_back(tr.mean_energy[k]);
    cols[2].push_back(tr.sem[k]);
    cols[3].push_back(tr.acceptance[k]);
  }
  if (std::isfinite(reference_energy)) {
    header.push_back("exact_energy_error");
    cols.emplace_back();
    for (double e : cols[1]) cols.back().push_back(std::abs(e - reference_energy));
  }
  write_csv(path, header, cols);
}

inline void write_enum_study(const EnumStudyReport &rep,
                             const std::vector<double> &targets,
                             const std::filesystem::path &dir) {
  // tvd.csv: both norm conventions per source.
  {
    std::vector<std::string> header = {"step"};
    std::vector<std::vector<double>> cols(1);
    for (std::size_t n = 0; n < rep.sources[0].tvd.size(); ++n)
      cols[0].push_back(static_cast<double>(n));
    for (const auto &s : rep.sources) {
      header.push_back("tvd_" + s.name);
      header.push_back("l1_" + s.name);
      std::vector<double> tv = s.tvd, l1;
      for (double t : tv) l1.push_back(2.0 * t);
      cols.push_back(tv);
      cols.push_back(l1);
    }
    write_csv((dir / "tvd.csv").string(), header, cols);
  }
  // energy.csv: projected energy error per source.
  {
    std::vector<std::string> header = {"step"};
    std::vector<std::vector<double>> cols(1);
    for (std::size_t n = 0; n < rep.sources[0].energy.size(); ++n)
      cols[0].push_back(static_cast<double>(n));
    for (const auto &s : rep.sources) {
      header.push_back("energy_" + s.name);
      header.push_back("energy_error_" + s.name);
      std::vector<double> err;
      for (double e : s.energy) err.push_back(std::abs(e - rep.target_energy));
      cols.push_back(s.energy);
      cols.push_back(err);
    }
    write_csv((dir / "energy.csv").string(), header, cols);
  }
  // speedup.csv: candidate sources vs the baseline.
  {
    std::vector<std::string> header = {"source", "target", "steps_baseline",
                                       "steps_candidate", "factor"};
    std::ofstream f(dir / "speedup.csv");
    for (std::size_t c = 0; c < header.size(); ++c)
      f << header[c] << (c + 1 < header.size() ? ',' : '\n');
    f.precision(12);
    for (const auto &s : rep.sources) {
      if (s.name == rep.baseline) continue;
      for (const auto &p : rep.speedup(s.name, targets))
        f << s.name << ',' << p.target << ',' << p.steps_baseline << ','
          << p.steps_candidate << ',' << p.factor << '\n';
    }
  }
}

inline nlohmann::json enum_study_json(const EnumStudyReport &rep,
                                      const std::vector<double> &targets) {
  nlohmann::json j;
  j["lambda2"] = rep.lambda2;
  j["relaxation_time"] = rep.tau;
  j["detailed_balance_violation"] = rep.db_violation;
  j["row_sum_error"] = rep.row_sum_error;
  j["target_energy"] = rep.target_energy;
  j["ground_energy"] = rep.ground_energy;
  j["support_size"] = rep.tm.support.size();
  j["excluded_states"] = rep.tm.excluded;
  j["baseline"] = rep.baseline;
  for (const auto &s : rep.sources) {
    nlohmann::json js;
    js["chi2"] = std::isfinite(s.chi2) ? nlohmann::json(s.chi2)
                                       : nlohmann::json("inf");
    js["chi2_support"] = s.chi2_support;
    js["excluded_mass"] = s.excluded_mass;
    js["fidelity"] = s.fidelity.fidelity;
    js["fidelity_bound_slack"] = s.fidelity.slack;
    js["mixing_bound_violated"] = s.ledger.violated;
    js["mixing_bound_worst_slack"] = s.ledger.worst_slack;
    js["tvd_final"] = s.tvd.back();
    if (std::isfinite(s.vqe_energy)) js["vqe_energy"] = s.vqe_energy;
    if (s.name != rep.baseline) {
      nlohmann::json sp = nlohmann::json::array();
      for (const auto &p : rep.speedup(s.name, targets))
        sp.push_back({{"target", p.target},
                      {"steps_baseline", p.steps_baseline},
                      {"steps_candidate", p.steps_candidate},
                      {"factor", p.factor}});
      js["speedup"] = sp;
    }
    j["sources"][s.name] = js;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline const std::vector<std::string> &preset_names() {
  static const std::vector<std::string> names = {
      "hubbard-1x4",    "hubbard-1x8",     "hubbard-2x4",
      "hubbard-large-L", "tfi-16-exact",   "tfi-24-sampled",
      "tfi-concat-40-80", "sr-compare-24", "acceptance-study"};
  return names;
}

namespace detail {

inline std::filesystem::path preset_dir(const ExperimentConfig &config,
                                        const std::string &name) {
  std::filesystem::path dir = std::filesystem::path(config.output_dir) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_json(const nlohmann::json &j,
                       const std::filesystem::path &path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  f << j.dump(2) << "\n";
}

/// Optimized VQE distribution on a sector basis, with provenance.
inline NamedDist vqe_source(VqeSimulator &sim, int layers, int restarts,
                            std::uint64_t seed, const std::string &name) {
  auto [ansatz, energy] = sim.optimize(layers, restarts, seed);
  StateVector psi = sim.prepare(ansatz);
  NamedDist d;
  d.name = name;
  d.nu0 = psi.probabilities();
  d.vqe_energy = energy;
  return d;
}

/// Shared body of the enumerable Hubbard presets.
inline void hubbard_enum_preset(const ExperimentConfig &config,
                                const std::string &name, int rows, int cols) {
  auto dir = preset_dir(config, name);
  HamiltonianSpec spec = HamiltonianSpec::hubbard(rows, cols, config.U);
  SectorBasis basis = half_filled_sector(spec);
  SparseOperator H = build_hamiltonian(spec, basis);

  double c = optimal_gutzwiller_c(spec, basis, H);
  SlaterDeterminant sd(spec.lattice, basis.constraint().n_up,
                       basis.constraint().n_down);
  GutzwillerWF wf(c, sd);
  HopMixer mixer(spec.lattice);

  VqeSimulator sim(spec, basis);
  std::uint64_t vqe_seed =
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqe);
  auto [ansatz, vqe_energy] =
      sim.optimize(config.vqe_layers, config.vqe_restarts, vqe_seed);
  StateVector psi = sim.prepare(ansatz);

  std::vector<NamedDist> sources;
  sources.push_back({"slater", slater_distribution(sd, basis),
                     sd.hopping_energy()});
  {
    NamedDist v;
    v.name = "vqe-sim-" + std::to_string(config.vqe_layers) + "layer";
    v.nu0 = psi.probabilities();
    v.vqe_energy = vqe_energy;
    sources.push_back(v);
  }
  {
    NamedDist u;
    u.name = "uniform";
    u.nu0 = Eigen::VectorXd::Constant(basis.size(), 1.0 / basis.size());
    sources.push_back(u);
  }

  EnumStudyReport rep = run_enum_study(wf, mixer, spec, basis, H,
                                       std::move(sources),
                                       config.analysis_steps, "slater");
  auto targets = config.parsed_tvd_targets();
  write_enum_study(rep, targets, dir);

  // Persist the VQE measurement samples for downstream large-L runs.
  {
    SampleStore store = sample_state(
        psi, config.vqe_samples,
        ExperimentConfig::component_seed(config.master_seed,
                                         ExperimentConfig::kSeedVqeSampling),
        spec, config.vqe_layers);
    save_samples(store, (dir / "samples-vqe.txt").string());
  }

  nlohmann::json j = enum_study_json(rep, targets);
  j["gutzwiller_c"] = c;
  j["master_seed"] = config.master_seed;
  j["vqe_seed"] = vqe_seed;
  write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
}

inline NqsWF obtain_nqs(const ExperimentConfig &config,
                        const HamiltonianSpec &spec,
                        const std::filesystem::path &dir, int chain_length) {
  if (!config.weights_in.empty()) return NqsWF::load(config.weights_in);
  const int n = spec.lattice.sites();
  Rng rng(ExperimentConfig::component_seed(config.master_seed,
                                           ExperimentConfig::kSeedSr),
          0);
  NqsWF wf = NqsWF::random(n, config.alpha * n, rng, config.init_stddev);
  SrConfig sc = config.sr();
  sc.chain_length = chain_length;
  double ref = tfi_chain_ground_energy(n, spec.J, spec.h);
  SrResult res = train(std::move(wf), spec, InitialSource::uniform(), sc, ref);
  if (res.aborted) throw std::runtime_error("NQS training diverged");
  res.wf.save((dir / "nqs.weights").string());
  std::vector<std::vector<double>> cols(4);
  for (std::size_t k = 0; k < res.trace.energy.size(); ++k) {
    cols[0].push_back(static_cast<double>(k));
    cols[1].push_back(res.trace.energy[k]);
    cols[2].push_back(res.trace.sem[k]);
    cols[3].push_back(res.trace.relative_error[k]);
  }
  write_csv((dir / "sr_train.csv").string(),
            {"iteration", "energy", "sem", "relative_error"}, cols);
  return std::move(res.wf);
}

inline void tfi_16_exact_preset(const ExperimentConfig &config) {
  auto dir = preset_dir(config, "tfi-16-exact");
  HamiltonianSpec spec = HamiltonianSpec::tfi(16, config.h, config.J);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  SparseOperator H = build_hamiltonian(spec, basis);

  NqsWF wf = obtain_nqs(config, spec, dir, 15);
  FlipMixer mixer(16);
  VqeSimulator sim(spec, basis);
  std::uint64_t vqe_seed =
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqe);

  std::vector<NamedDist> sources;
  {
    NamedDist u;
    u.name = "uniform";
    u.nu0 = Eigen::VectorXd::Constant(basis.size(), 1.0 / basis.size());
    sources.push_back(u);
  }
  for (int layers = 1; layers <= 4; ++layers)
    sources.push_back(detail::vqe_source(sim, layers, config.vqe_restarts,
                                         vqe_seed + layers,
                                         "vqe-" + std::to_string(layers)));

  EnumStudyReport rep = run_enum_study(wf, mixer, spec, basis, H,
                                       std::move(sources),
                                       config.analysis_steps, "uniform");
  auto targets = config.parsed_tvd_targets();
  write_enum_study(rep, targets, dir);
  nlohmann::json j = enum_study_json(rep, targets);
  j["master_seed"] = config.master_seed;
  j["free_fermion_ground_energy"] = tfi_chain_ground_energy(16, config.J,
                                                            config.h);
  write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
}

inline void hubbard_large_preset(const ExperimentConfig &config) {
  auto dir = preset_dir(config, "hubbard-large-L");
  std::filesystem::path src =
      std::filesystem::path(config.output_dir) / "hubbard-1x8" /
      "samples-vqe.txt";
  if (!std::filesystem::exists(src))
    throw std::runtime_error("hubbard-large-L needs " + src.string() +
                             "; run `preset hubbard-1x8` first");
  SampleStore small = load_samples(src.string());
  SampleStore big = concatenate(
      small, 2, config.vqe_samples,
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqeSampling));

  HamiltonianSpec spec = HamiltonianSpec::hubbard(1, 16, config.U);
  SectorConstraint constraint = big.constraint;
  SlaterDeterminant sd(spec.lattice, constraint.n_up, constraint.n_down);
  GutzwillerWF wf(config.gutzwiller_c, sd);
  HopMixer mixer(spec.lattice);
  ChainConfig cc = config.chain();

  struct Entry {
    const char *name;
    InitialSource source;
  };
  std::vector<Entry> runs;
  runs.push_back({"vqe-concat", InitialSource::store(big)});
  runs.push_back({"slater", InitialSource::slater(sd)});
  runs.push_back({"uniform", InitialSource::uniform()});
  nlohmann::json j;
  for (auto &run : runs) {
    RunResult r = run_chains(cc, wf, mixer, spec, constraint, run.source);
    write_trace_csv((dir / ("energy-" + std::string(run.name) + ".csv")).string(),
                    r.trace);
    j["final_energy"][run.name] = r.trace.mean_energy.back();
    j["final_sem"][run.name] = r.trace.sem.back();
    j["self_loop_fraction"][run.name] = r.trace.self_loop_fraction;
  }
  j["master_seed"] = config.master_seed;
  write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
}

inline void tfi_24_sampled_preset(const ExperimentConfig &config) {
  auto dir = preset_dir(config, "tfi-24-sampled");
  HamiltonianSpec spec = HamiltonianSpec::tfi(24, config.h, config.J);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());

  NqsWF wf = obtain_nqs(config, spec, dir, 20);
  FlipMixer mixer(24);
  VqeSimulator sim(spec, basis);
  double ref = tfi_chain_ground_energy(24, config.J, config.h);
  ChainConfig cc = config.chain();

  nlohmann::json j;
  {
    RunResult r = run_chains(cc, wf, mixer, spec, SectorConstraint::all_spins(),
                             InitialSource::uniform());
    write_trace_csv((dir / "energy-uniform.csv").string(), r.trace, ref);
    j["final_energy"]["uniform"] = r.trace.mean_energy.back();
  }
  std::uint64_t vqe_seed =
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqe);
  for (int layers = 1; layers <= config.vqe_layers; ++layers) {
    auto [ansatz, energy] = sim.optimize(layers, config.vqe_restarts,
                                         vqe_seed + layers);
    StateVector psi = sim.prepare(ansatz);
    SampleStore store = sample_state(
        psi, config.vqe_samples,
        ExperimentConfig::component_seed(config.master_seed,
                                         ExperimentConfig::kSeedVqeSampling) +
            layers,
        spec, layers);
    save_samples(store,
                 (dir / ("samples-vqe-" + std::to_string(layers) + ".txt"))
                     .string());
    RunResult r = run_chains(cc, wf, mixer, spec, SectorConstraint::all_spins(),
                             InitialSource::store(store));
    std::string name = "vqe-" + std::to_string(layers);
    write_trace_csv((dir / ("energy-" + name + ".csv")).string(), r.trace, ref);
    j["final_energy"][name] = r.trace.mean_energy.back();
    j["vqe_energy"][name] = energy;
  }
  j["reference_energy"] = ref;
  j["master_seed"] = config.master_seed;
  write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
}

inline void sr_compare_preset(const ExperimentConfig &config,
                              const std::string &name, int n_spins,
                              int concat_factor) {
  auto dir = preset_dir(config, name);
  const int small_n = concat_factor > 1 ? n_spins / concat_factor : n_spins;
  HamiltonianSpec spec = HamiltonianSpec::tfi(n_spins, config.h, config.J);
  double ref = tfi_chain_ground_energy(n_spins, config.J, config.h);

  SrConfig sc = config.sr();
  sc.chain_length = n_spins >= 24 ? 20 : 15;
  Rng init_rng(ExperimentConfig::component_seed(config.master_seed,
                                                ExperimentConfig::kSeedSr),
               1);
  NqsWF wf0 = NqsWF::random(n_spins, config.alpha * n_spins, init_rng,
                            config.init_stddev);

  auto run_source = [&](const std::string &src_name,
                        const InitialSource &source) {
    SrResult res = train(wf0, spec, source, sc, ref);
    std::vector<std::vector<double>> cols(4);
    for (std::size_t k = 0; k < res.trace.energy.size(); ++k) {
      cols[0].push_back(static_cast<double>(k));
      cols[1].push_back(res.trace.energy[k]);
      cols[2].push_back(res.trace.sem[k]);
      cols[3].push_back(res.trace.relative_error[k]);
    }
    write_csv((dir / ("sr-" + src_name + ".csv")).string(),
              {"iteration", "energy", "sem", "relative_error"}, cols);
    return res;
  };

  nlohmann::json j;
  SrResult uni = run_source("uniform", InitialSource::uniform());
  j["final_relative_error"]["uniform"] = uni.relative_error;

  HamiltonianSpec small_spec = HamiltonianSpec::tfi(small_n, config.h, config.J);
  SectorBasis small_basis =
      enumerate_sector(small_spec, SectorConstraint::all_spins());
  VqeSimulator sim(small_spec, small_basis);
  std::uint64_t vqe_seed =
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqe);

  std::vector<std::pair<std::string, std::vector<double>>> candidates;
  for (int layers = 1; layers <= config.vqe_layers; ++layers) {
    auto [ansatz, energy] = sim.optimize(layers, config.vqe_restarts,
                                         vqe_seed + layers);
    StateVector psi = sim.prepare(ansatz);
    SampleStore store = sample_state(
        psi, config.vqe_samples,
        ExperimentConfig::component_seed(config.master_seed,
                                         ExperimentConfig::kSeedVqeSampling) +
            layers,
        small_spec, layers);
    SampleStore big =
        concat_factor > 1
            ? concatenate(store, concat_factor, config.vqe_samples,
                          ExperimentConfig::component_seed(
                              config.master_seed,
                              ExperimentConfig::kSeedMixing) +
                              layers)
            : store;
    std::string src_name = "vqe-" + std::to_string(layers) +
                           (concat_factor > 1 ? "-concat" : "");
    SrResult res = run_source(src_name, InitialSource::store(big));
    candidates.push_back({src_name, res.trace.relative_error});
    j["final_relative_error"][src_name] = res.relative_error;
    j["vqe_energy"][src_name] = energy;
  }

  std::vector<double> thresholds = {0.3, 0.1, 0.03, 0.01, 0.003, 0.001};
  auto table = compare_sources(uni.trace.relative_error, candidates, thresholds);
  {
    std::ofstream f(dir / "speedup.csv");
    f << "source,threshold,iters_uniform,iters_source,factor\n";
    for (const auto &e : table)
      f << e.source << ',' << e.threshold << ',' << e.iters_uniform << ','
        << e.iters_source << ',' << e.factor << '\n';
  }
  j["reference_energy"] = ref;
  j["master_seed"] = config.master_seed;
  write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
}

inline void acceptance_study_preset(const ExperimentConfig &config) {
  auto dir = preset_dir(config, "acceptance-study");
  nlohmann::json j;

  // Gutzwiller parameter scan on the 1x4 half-filled chain.
  HamiltonianSpec spec = HamiltonianSpec::hubbard(1, 4, 4.0);
  SectorBasis basis = half_filled_sector(spec);
  SparseOperator H = build_hamiltonian(spec, basis);
  double c = optimal_gutzwiller_c(spec, basis, H);
  j["gutzwiller_c"] = c;

  SlaterDeterminant sd(spec.lattice, 2, 2);
  GutzwillerWF wf(c, sd);
  HopMixer mixer(spec.lattice);
  VqeSimulator sim(spec, basis);
  std::vector<NamedDist> sources;
  sources.push_back({"slater", slater_distribution(sd, basis),
                     sd.hopping_energy()});
  sources.push_back(detail::vqe_source(
      sim, 2, config.vqe_restarts,
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqe),
      "vqe-sim-2layer"));
  {
    NamedDist u;
    u.name = "uniform";
    u.nu0 = Eigen::VectorXd::Constant(basis.size(), 1.0 / basis.size());
    sources.push_back(u);
  }
  EnumStudyReport rep =
      run_enum_study(wf, mixer, spec, basis, H, std::move(sources), 200,
                     "slater");
  auto targets = config.parsed_tvd_targets();
  write_enum_study(rep, targets, dir);
  j["study"] = enum_study_json(rep, targets);

  // Noise-interpolation curves.
  nlohmann::json noise = nlohmann::json::array();
  Eigen::VectorXd base = exact_distribution(wf, basis);
  for (double eps : {0.0, 0.1, 0.2, 0.4, 0.8, 1.0}) {
    Eigen::VectorXd mixed = mix_with_uniform_exact(base, eps);
    noise.push_back({{"epsilon", eps}, {"tvd", tvd(mixed, base)}});
  }
  j["noise_interpolation"] = noise;
  j["master_seed"] = config.master_seed;
  write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
}

}  // namespace detail

/**
 * Runs one canonical experiment preset end to end, writing CSVs and a JSON
 * report under <output_dir>/<name>/. Budgets (single core): the enumerable
 * presets and acceptance-study finish in minutes; tfi-24-sampled,
 * tfi-concat-40-80 and sr-compare-24 are hour-scale studies.
 */
inline void run_preset(const std::string &name, const ExperimentConfig &config) {
  if (name == "hubbard-1x4")
    detail::hubbard_enum_preset(config, name, 1, 4);
  else if (name == "hubbard-1x8")
    detail::hubbard_enum_preset(config, name, 1, 8);
  else if (name == "hubbard-2x4")
    detail::hubbard_enum_preset(config, name, 2, 4);
  else if (name == "hubbard-large-L")
    detail::hubbard_large_preset(config);
  else if (name == "tfi-16-exact")
    detail::tfi_16_exact_preset(config);
  else if (name == "tfi-24-sampled")
    detail::tfi_24_sampled_preset(config);
  else if (name == "tfi-concat-40-80")
    detail::sr_compare_preset(config, name, 40, 2);
  else if (name == "sr-compare-24")
    detail::sr_compare_preset(config, name, 24, 1);
  else if (name == "acceptance-study")
    detail::acceptance_study_preset(config);
  else {
    std::string msg = "unknown preset '" + name + "'; valid presets:";
    for (const auto &n : preset_names()) msg += " " + n;
    throw ConfigError(msg);
  }
}

}  // namespace qevmc

#endif  // QEVMC_PRESETS_HPP
