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

#include <filesystem>
#include <fstream>

#include "catch2/catch_amalgamated.hpp"
#include "qevmc/config.hpp"

using namespace qevmc;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("defaults describe the 1x4 half-filled Hubbard baseline") {
  ExperimentConfig c;
  c.validate();
  CHECK(c.model == "hubbard");
  CHECK(c.lattice().model == Model::kHubbard);
  CHECK(c.lattice().boundary == Boundary::kOpen);
  CHECK(c.hamiltonian().U == 4.0);
  SectorConstraint sc = c.constraint();
  CHECK(sc.n_up == 2);
  CHECK(sc.n_down == 2);
  CHECK(c.parsed_tvd_targets() ==
        std::vector<double>{0.3, 0.2, 0.1, 0.05, 0.02, 0.01});
}

TEST_CASE("half filling splits odd site counts deterministically") {
  ExperimentConfig c;
  c.cols = 5;
  SectorConstraint sc = c.constraint();
  CHECK(sc.n_up == 2);
  CHECK(sc.n_down == 3);
  c.n_up = 1;
  c.n_down = 1;
  sc = c.constraint();
  CHECK(sc.n_up == 1);
  CHECK(sc.n_down == 1);
}

TEST_CASE("serialize/parse round trip reproduces every field") {
  ExperimentConfig c;
  c.model = "tfi";
  c.rows = 1;
  c.cols = 16;
  c.boundary = "open";
  c.h = 2.0;
  c.alpha = 2;
  c.weights_in = "nqs.weights";
  c.vqe_layers = 3;
  c.vqe_restarts = 7;
  c.vqe_samples = 1234;
  c.n_chains = 77;
  c.chain_length = 13;
  c.burn_in = 4;
  c.thinning = 2;
  c.sr_iterations = 55;
  c.sr_eta = 0.01;
  c.analysis_steps = 99;
  c.tvd_targets = "0.5,0.25";
  c.output_dir = "results";
  c.master_seed = 424242;

  ExperimentConfig back = parse_config_text(serialize(c));
  CHECK(serialize(back) == serialize(c));
  CHECK(back.model == "tfi");
  CHECK(back.cols == 16);
  CHECK(back.h == 2.0);
  CHECK(back.alpha == 2);
  CHECK(back.weights_in == "nqs.weights");
  CHECK(back.vqe_samples == 1234);
  CHECK(back.thinning == 2);
  CHECK(back.sr_eta == 0.01);
  CHECK(back.tvd_targets == "0.5,0.25");
  CHECK(back.master_seed == 424242);
}

TEST_CASE("parser errors carry origin and line number") {
  CHECK_THROWS_WITH(parse_config_text("[model]\nbogus_key = 3\n", "my.cfg"),
                    ContainsSubstring("my.cfg:2") &&
                        ContainsSubstring("bogus_key"));
  CHECK_THROWS_WITH(parse_config_text("[nonsense]\n"),
                    ContainsSubstring("unknown section"));
  CHECK_THROWS_WITH(parse_config_text("[model]\nrows = abc\n"),
                    ContainsSubstring("not an integer"));
  CHECK_THROWS_WITH(parse_config_text("rows = 2\n"),
                    ContainsSubstring("outside any"));
  CHECK_THROWS_WITH(parse_config_text("[model\n"),
                    ContainsSubstring("unterminated"));
  CHECK_THROWS_WITH(parse_config_text("[model]\njust text\n"),
                    ContainsSubstring("key = value"));
  CHECK_THROWS_AS(parse_config_text("[model]\nmodel = ising\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("/nonexistent/qevmc.cfg"), ConfigError);
}

TEST_CASE("comments and blank lines are ignored") {
  ExperimentConfig c = parse_config_text(
      "# leading comment\n"
      "[model]\n"
      "\n"
      "cols = 8   # trailing comment\n");
  CHECK(c.cols == 8);
}

TEST_CASE("attractive U parses with a warning, zero chain length is legal") {
  ExperimentConfig c = parse_config_text("[model]\nU = -1\n");
  REQUIRE(c.warnings.size() == 1);
  CHECK_THAT(c.warnings[0], ContainsSubstring("U < 0"));

  ExperimentConfig z = parse_config_text("[chain]\nchain_length = 0\n");
  CHECK(z.chain_length == 0);
  z.chain().validate();
}

TEST_CASE("component seeds are distinct splitmix64 outputs") {
  std::uint64_t master = 1;
  std::uint64_t s = master;
  std::uint64_t first = splitmix64(s);
  std::uint64_t second = splitmix64(s);
  std::uint64_t third = splitmix64(s);
  CHECK(ExperimentConfig::component_seed(master, ExperimentConfig::kSeedVqe) ==
        first);
  CHECK(ExperimentConfig::component_seed(
            master, ExperimentConfig::kSeedVqeSampling) == second);
  CHECK(ExperimentConfig::component_seed(master,
                                         ExperimentConfig::kSeedChains) == third);
  CHECK(ExperimentConfig().chain().seed ==
        ExperimentConfig::component_seed(1, ExperimentConfig::kSeedChains));
  CHECK(ExperimentConfig().sr().seed ==
        ExperimentConfig::component_seed(1, ExperimentConfig::kSeedSr));
  // different masters decorrelate every component seed
  CHECK(ExperimentConfig::component_seed(1, 0) !=
        ExperimentConfig::component_seed(2, 0));
}

TEST_CASE("manifest written to disk parses back identically") {
  ExperimentConfig c;
  c.model = "tfi";
  c.cols = 16;
  auto path =
      std::filesystem::temp_directory_path() / "qevmc_manifest_test.txt";
  write_manifest(c, path.string());
  ExperimentConfig back = parse_config(path.string());
  CHECK(serialize(back) == serialize(c));
  std::filesystem::remove(path);
}

TEST_CASE("validation rejects out-of-range values") {
  ExperimentConfig c;
  c.rows = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig();
  c.alpha = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig();
  c.thinning = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ExperimentConfig();
  c.sr_eta = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
