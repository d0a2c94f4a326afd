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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qevmc/presets.hpp"

namespace {

using namespace qevmc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string output;
  CLI::Option *seed_opt = nullptr;
  CLI::Option *output_opt = nullptr;

  void attach(CLI::App *cmd) {
    cmd->add_option("--config", config_path, "experiment config file");
    seed_opt = cmd->add_option("--seed", seed, "master seed override");
    output_opt = cmd->add_option("--output", output, "output directory override");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig c = config_path.empty() ? ExperimentConfig{}
                                             : parse_config(config_path);
    if (seed_opt->count() > 0) c.master_seed = seed;
    if (output_opt->count() > 0) c.output_dir = output;
    for (const auto &w : c.warnings) std::cerr << "warning: " << w << "\n";
    return c;
  }
};

InitialSource make_source(const std::string &spec_str,
                          const SlaterDeterminant *sd, SampleStore &storage) {
  if (spec_str == "uniform") return InitialSource::uniform();
  if (spec_str == "slater") {
    if (!sd) throw ConfigError("slater source is only available for hubbard");
    return InitialSource::slater(*sd);
  }
  if (spec_str.rfind("store:", 0) == 0) {
    storage = load_samples(spec_str.substr(6));
    return InitialSource::store(storage);
  }
  throw ConfigError("unknown source '" + spec_str +
                    "' (use uniform, slater, or store:<path>)");
}

int cmd_vqe(const ExperimentConfig &config) {
  HamiltonianSpec spec = config.hamiltonian();
  SectorBasis basis = enumerate_sector(spec, config.constraint());
  VqeSimulator sim(spec, basis);
  std::uint64_t vqe_seed = ExperimentConfig::component_seed(
      config.master_seed, ExperimentConfig::kSeedVqe);
  auto [ansatz, energy] =
      sim.optimize(config.vqe_layers, config.vqe_restarts, vqe_seed);
  StateVector psi = sim.prepare(ansatz);

  std::filesystem::create_directories(config.output_dir);
  std::filesystem::path dir(config.output_dir);
  SampleStore store = sample_state(
      psi, config.vqe_samples,
      ExperimentConfig::component_seed(config.master_seed,
                                       ExperimentConfig::kSeedVqeSampling),
      spec, config.vqe_layers);
  save_samples(store, (dir / "samples-vqe.txt").string());

  nlohmann::json j;
  j["energy"] = energy;
  j["layers"] = config.vqe_layers;
  j["restarts"] = config.vqe_restarts;
  j["seed"] = vqe_seed;
  for (int i = 0; i < ansatz.theta.size(); ++i)
    j["theta"].push_back(ansatz.theta[i]);
  detail::write_json(j, dir / "vqe.json");
  write_manifest(config, (dir / "manifest.txt").string());
  std::cout << "variational energy " << energy << "\n"
            << "samples written to " << (dir / "samples-vqe.txt").string()
            << "\n";
  return kExitOk;
}

int cmd_vmc(const ExperimentConfig &config, const std::string &source_name) {
  HamiltonianSpec spec = config.hamiltonian();
  SectorConstraint constraint = config.constraint();
  ChainConfig cc = config.chain();
  std::filesystem::create_directories(config.output_dir);
  std::filesystem::path dir(config.output_dir);

  SampleStore storage;
  RunResult result;
  if (spec.lattice.model == Model::kHubbard) {
    SlaterDeterminant sd(spec.lattice, constraint.n_up, constraint.n_down);
    GutzwillerWF wf(config.gutzwiller_c, sd);
    HopMixer mixer(spec.lattice);
    InitialSource source = make_source(source_name, &sd, storage);
    result = run_chains(cc, wf, mixer, spec, constraint, source);
  } else {
    const int n = spec.lattice.sites();
    NqsWF wf;
    if (!config.weights_in.empty()) {
      wf = NqsWF::load(config.weights_in);
    } else {
      Rng rng(ExperimentConfig::component_seed(config.master_seed,
                                               ExperimentConfig::kSeedSr),
              0);
      wf = NqsWF::random(n, config.alpha * n, rng, config.init_stddev);
      std::cerr << "warning: no weights_in configured, using random weights\n";
    }
    FlipMixer mixer(n);
    InitialSource source = make_source(source_name, nullptr, storage);
    result = run_chains(cc, wf, mixer, spec, constraint, source);
  }

  write_trace_csv((dir / "trace.csv").string(), result.trace);
  save_samples(result.final_samples, (dir / "final-samples.txt").string());
  write_manifest(config, (dir / "manifest.txt").string());
  std::cout << "final energy " << result.trace.mean_energy.back() << " +- "
            << result.trace.sem.back() << "\n";
  return kExitOk;
}

int cmd_sr_train(const ExperimentConfig &config,
                 const std::string &source_name) {
  HamiltonianSpec spec = config.hamiltonian();
  if (spec.lattice.model != Model::kTfi)
    throw ConfigError("sr train supports the tfi model");
  const int n = spec.lattice.sites();
  std::filesystem::create_directories(config.output_dir);
  std::filesystem::path dir(config.output_dir);

  NqsWF wf;
  if (!config.weights_in.empty()) {
    wf = NqsWF::load(config.weights_in);
  } else {
    Rng rng(ExperimentConfig::component_seed(config.master_seed,
                                             ExperimentConfig::kSeedSr),
            0);
    wf = NqsWF::random(n, config.alpha * n, rng, config.init_stddev);
  }

  SampleStore storage;
  InitialSource source = make_source(source_name, nullptr, storage);
  double ref = spec.lattice.rows == 1
                   ? tfi_chain_ground_energy(n, spec.J, spec.h)
                   : std::numeric_limits<double>::quiet_NaN();
  SrResult res = train(std::move(wf), spec, source, config.sr(), ref);

  std::vector<std::vector<double>> cols(5);
  for (std::size_t k = 0; k < res.trace.energy.size(); ++k) {
    cols[0].push_back(static_cast<double>(k));
    cols[1].push_back(res.trace.energy[k]);
    cols[2].push_back(res.trace.sem[k]);
    cols[3].push_back(res.trace.relative_error[k]);
    cols[4].push_back(res.trace.param_norm[k]);
  }
  write_csv((dir / "sr_train.csv").string(),
            {"iteration", "energy", "sem", "relative_error", "param_norm"},
            cols);
  res.wf.save((dir / "nqs.weights").string());
  write_manifest(config, (dir / "manifest.txt").string());
  if (res.aborted) {
    std::cerr << "training diverged after " << res.trace.energy.size()
              << " iterations\n";
    return kExitNumerical;
  }
  std::cout << "final energy " << res.final_energy;
  if (std::isfinite(res.relative_error))
    std::cout << " (relative error " << res.relative_error << ")";
  std::cout << "\nweights written to " << (dir / "nqs.weights").string() << "\n";
  return kExitOk;
}

int cmd_analyze(const ExperimentConfig &config) {
  HamiltonianSpec spec = config.hamiltonian();
  SectorBasis basis = enumerate_sector(spec, config.constraint());
  SparseOperator H = build_hamiltonian(spec, basis);
  std::filesystem::create_directories(config.output_dir);
  std::filesystem::path dir(config.output_dir);
  VqeSimulator sim(spec, basis);
  std::uint64_t vqe_seed = ExperimentConfig::component_seed(
      config.master_seed, ExperimentConfig::kSeedVqe);

  std::vector<NamedDist> sources;
  std::string baseline;
  EnumStudyReport rep;
  if (spec.lattice.model == Model::kHubbard) {
    SectorConstraint constraint = config.constraint();
    SlaterDeterminant sd(spec.lattice, constraint.n_up, constraint.n_down);
    GutzwillerWF wf(config.gutzwiller_c, sd);
    sources.push_back({"slater", slater_distribution(sd, basis),
                       sd.hopping_energy()});
    sources.push_back(detail::vqe_source(
        sim, config.vqe_layers, config.vqe_restarts, vqe_seed,
        "vqe-sim-" + std::to_string(config.vqe_layers) + "layer"));
    NamedDist u;
    u.name = "uniform";
    u.nu0 = Eigen::VectorXd::Constant(basis.size(), 1.0 / basis.size());
    sources.push_back(u);
    baseline = "slater";
    rep = run_enum_study(wf, HopMixer(spec.lattice), spec, basis, H,
                         std::move(sources), config.analysis_steps, baseline);
  } else {
    const int n = spec.lattice.sites();
    NqsWF wf;
    if (config.weights_in.empty())
      throw ConfigError("analyze on tfi needs weights_in (a trained NQS)");
    wf = NqsWF::load(config.weights_in);
    NamedDist u;
    u.name = "uniform";
    u.nu0 = Eigen::VectorXd::Constant(basis.size(), 1.0 / basis.size());
    sources.push_back(u);
    for (int layers = 1; layers <= config.vqe_layers; ++layers)
      sources.push_back(detail::vqe_source(sim, layers, config.vqe_restarts,
                                           vqe_seed + layers,
                                           "vqe-" + std::to_string(layers)));
    baseline = "uniform";
    rep = run_enum_study(wf, FlipMixer(n), spec, basis, H, std::move(sources),
                         config.analysis_steps, baseline);
  }

  auto targets = config.parsed_tvd_targets();
  write_enum_study(rep, targets, dir);
  nlohmann::json j = enum_study_json(rep, targets);
  j["master_seed"] = config.master_seed;
  detail::write_json(j, dir / "report.json");
  write_manifest(config, (dir / "manifest.txt").string());
  std::cout << "lambda2 " << rep.lambda2 << ", relaxation time " << rep.tau
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"variational Monte Carlo with circuit-sampled initial "
               "distributions"};
  app.require_subcommand(1);

  auto *vqe_cmd = app.add_subcommand("vqe", "optimize a layered ansatz and "
                                            "sample its distribution");
  CommonOpts vqe_opts;
  vqe_opts.attach(vqe_cmd);
  int vqe_layers = -1;
  vqe_cmd->add_option("--layers", vqe_layers, "ansatz layers override");

  auto *samples_cmd = app.add_subcommand("samples", "sample-store utilities");
  samples_cmd->require_subcommand(1);
  std::string s_in, s_out;
  int f_n_up = 0, f_n_down = 0;
  auto *filter_cmd = samples_cmd->add_subcommand(
      "filter", "postselect a store onto a particle-number sector");
  filter_cmd->add_option("--in", s_in, "input store")->required();
  filter_cmd->add_option("--out", s_out, "output store")->required();
  filter_cmd->add_option("--n-up", f_n_up, "up-spin count")->required();
  filter_cmd->add_option("--n-down", f_n_down, "down-spin count")->required();

  int c_factor = 2;
  std::uint64_t c_n = 5000, c_seed = 1;
  auto *concat_cmd = samples_cmd->add_subcommand(
      "concat", "build large-system samples by block concatenation");
  concat_cmd->add_option("--in", s_in, "input store")->required();
  concat_cmd->add_option("--out", s_out, "output store")->required();
  concat_cmd->add_option("--factor", c_factor, "number of blocks");
  concat_cmd->add_option("--n", c_n, "output sample count");
  concat_cmd->add_option("--seed", c_seed, "draw seed");

  double m_epsilon = 0.1;
  auto *mix_cmd = samples_cmd->add_subcommand(
      "mix", "mix a store with uniform sector noise");
  mix_cmd->add_option("--in", s_in, "input store")->required();
  mix_cmd->add_option("--out", s_out, "output store")->required();
  mix_cmd->add_option("--epsilon", m_epsilon, "uniform fraction");
  mix_cmd->add_option("--n", c_n, "output sample count");
  mix_cmd->add_option("--seed", c_seed, "draw seed");

  auto *vmc_cmd = app.add_subcommand("vmc", "Markov chain Monte Carlo");
  auto *vmc_run = vmc_cmd->add_subcommand("run", "run chains and record the "
                                                 "energy trace");
  CommonOpts vmc_opts;
  vmc_opts.attach(vmc_run);
  std::string vmc_source = "uniform";
  vmc_run->add_option("--source", vmc_source,
                      "initial distribution: uniform, slater, store:<path>");

  auto *sr_cmd = app.add_subcommand("sr", "stochastic reconfiguration");
  auto *sr_train = sr_cmd->add_subcommand("train", "train NQS weights");
  CommonOpts sr_opts;
  sr_opts.attach(sr_train);
  std::string sr_source = "uniform";
  sr_train->add_option("--source", sr_source,
                       "initial distribution: uniform, store:<path>");

  auto *analyze_cmd =
      app.add_subcommand("analyze", "exact mixing analysis on an enumerable "
                                    "sector");
  CommonOpts analyze_opts;
  analyze_opts.attach(analyze_cmd);

  auto *preset_cmd = app.add_subcommand("preset", "run a canonical experiment");
  CommonOpts preset_opts;
  preset_opts.attach(preset_cmd);
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (vqe_cmd->parsed()) {
      ExperimentConfig config = vqe_opts.resolve();
      if (vqe_layers >= 0) config.vqe_layers = vqe_layers;
      return cmd_vqe(config);
    }
    if (filter_cmd->parsed()) {
      PostselectResult r = postselect(
          load_samples(s_in), SectorConstraint::fixed_fill(f_n_up, f_n_down));
      save_samples(r.store, s_out);
      std::cout << "retention " << r.retention << " (" << r.store.samples.size()
                << " samples)\n";
      return kExitOk;
    }
    if (concat_cmd->parsed()) {
      save_samples(concatenate(load_samples(s_in), c_factor, c_n, c_seed),
                   s_out);
      return kExitOk;
    }
    if (mix_cmd->parsed()) {
      save_samples(mix_with_uniform(load_samples(s_in), m_epsilon, c_n, c_seed),
                   s_out);
      return kExitOk;
    }
    if (vmc_run->parsed()) return cmd_vmc(vmc_opts.resolve(), vmc_source);
    if (sr_train->parsed()) return cmd_sr_train(sr_opts.resolve(), sr_source);
    if (analyze_cmd->parsed()) return cmd_analyze(analyze_opts.resolve());
    if (preset_cmd->parsed()) {
      run_preset(preset_name, preset_opts.resolve());
      return kExitOk;
    }
  } catch (const ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
