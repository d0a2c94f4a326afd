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

#include <cmath>
#include <map>

#include "catch2/catch_amalgamated.hpp"
#include "qevmc/analysis.hpp"
#include "qevmc/vqe.hpp"

using namespace qevmc;
using Catch::Matchers::WithinAbs;

TEST_CASE("zero layers prepare the reference states") {
  {
    HamiltonianSpec spec = HamiltonianSpec::tfi(4);
    SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
    VqeSimulator sim(spec, basis);
    StateVector psi = sim.prepare(VqeAnsatz::make(Model::kTfi, 0));
    Eigen::VectorXd p = psi.probabilities();
    for (Eigen::Index i = 0; i < p.size(); ++i)
      CHECK_THAT(p[i], WithinAbs(1.0 / 16.0, 1e-14));
  }
  {
    HamiltonianSpec spec = HamiltonianSpec::hubbard(1, 4);
    SectorBasis basis = half_filled_sector(spec);
    VqeSimulator sim(spec, basis);
    StateVector psi = sim.prepare(VqeAnsatz::make(Model::kHubbard, 0));
    SlaterDeterminant sd(spec.lattice, 2, 2);
    Eigen::VectorXd ref = slater_distribution(sd, basis);
    CHECK((psi.probabilities() - ref).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("a zero-angle circuit is the identity on the reference state") {
  HamiltonianSpec spec = HamiltonianSpec::hubbard(1, 4);
  SectorBasis basis = half_filled_sector(spec);
  VqeSimulator sim(spec, basis);
  double e0 = sim.energy(VqeAnsatz::make(Model::kHubbard, 0));
  double e2 = sim.energy(VqeAnsatz::make(Model::kHubbard, 2));
  CHECK_THAT(e2, WithinAbs(e0, 1e-12));
}

TEST_CASE("one TFI layer matches a dense gate-product oracle") {
  HamiltonianSpec spec = HamiltonianSpec::tfi(2, 1.0, 1.0);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  VqeSimulator sim(spec, basis);
  VqeAnsatz a = VqeAnsatz::make(Model::kTfi, 1);
  a.theta << 0.3, 0.0, 0.5;
  StateVector psi = sim.prepare(a);
  CHECK_THAT(psi.norm(), WithinAbs(1.0, 1e-12));

  // Oracle: dense generators, exponentiated by diagonalization, applied to
  // the all-plus state in layer order (even-ZZ, odd-ZZ, field).
  Eigen::VectorXd zz(4);
  for (int k = 0; k < 4; ++k)
    zz[k] = -1.0 * basis.state(k).spin(0) * basis.state(k).spin(1);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int j = 0; j < 2; ++j) {
      BasisState y = basis.state(r);
      y.flip(j);
      X(r, static_cast<int>(basis.index(y))) = -1.0;  // generator -h sum X
    }
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(4, Complex(0.5, 0.0));
  for (int k = 0; k < 4; ++k) v[k] *= std::exp(Complex(0.0, -0.3 * zz[k]));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
  Eigen::VectorXcd phases(4);
  for (int k = 0; k < 4; ++k)
    phases[k] = std::exp(Complex(0.0, -0.5 * es.eigenvalues()[k]));
  v = es.eigenvectors().cast<Complex>() *
      phases.cwiseProduct(es.eigenvectors().transpose().cast<Complex>() * v);
  CHECK((psi.amplitudes - v).norm() < 1e-10);
}

TEST_CASE("one layer solves the 2-spin TFI exactly and deterministically") {
  HamiltonianSpec spec = HamiltonianSpec::tfi(2, 1.0, 1.0);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  VqeSimulator sim(spec, basis);
  auto [a1, e1] = sim.optimize(1, 6, 11);
  CHECK_THAT(e1, WithinAbs(-std::sqrt(5.0), 1e-6));
  auto [a2, e2] = sim.optimize(1, 6, 11);
  CHECK(a1.theta == a2.theta);
  CHECK(e1 == e2);

  // More layers never hurt: the zero-angle baseline already contains the
  // 1-layer optimum energy ordering property.
  auto [a0, e0] = sim.optimize(0, 1, 11);
  CHECK(e1 <= e0);
  CHECK_THROWS_AS(sim.optimize(5, 1, 11), std::invalid_argument);
}

TEST_CASE("matrix-free TFI energy agrees with the sparse expectation") {
  HamiltonianSpec spec = HamiltonianSpec::tfi(5, 1.0, 0.7);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  VqeSimulator sim(spec, basis);
  Rng rng(3);
  StateVector v;
  v.basis = &basis;
  v.amplitudes.resize(32);
  for (int k = 0; k < 32; ++k)
    v.amplitudes[k] = Complex(rng.normal(), rng.normal());
  v.normalize();
  CHECK_THAT(sim.tfi_energy_matrix_free(v),
             WithinAbs(expectation(sim.hamiltonian(), v), 1e-12));
}

TEST_CASE("Hamiltonian is not materialized for large TFI registers") {
  HamiltonianSpec spec = HamiltonianSpec::tfi(17);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  VqeSimulator sim(spec, basis);
  CHECK_THROWS_AS(sim.hamiltonian(), std::logic_error);
  // theta = 0 energy of the all-plus state is -h N.
  CHECK_THAT(sim.energy(VqeAnsatz::make(Model::kTfi, 0)),
             WithinAbs(-17.0, 1e-9));
}

TEST_CASE("ansatz/spec mismatch is rejected") {
  HamiltonianSpec spec = HamiltonianSpec::tfi(2);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  VqeSimulator sim(spec, basis);
  CHECK_THROWS_AS(sim.prepare(VqeAnsatz::make(Model::kHubbard, 1)),
                  std::invalid_argument);
}

TEST_CASE("sampling the all-plus state is uniform") {
  HamiltonianSpec spec = HamiltonianSpec::tfi(2);
  SectorBasis basis = enumerate_sector(spec, SectorConstraint::all_spins());
  VqeSimulator sim(spec, basis);
  StateVector psi = sim.prepare(VqeAnsatz::make(Model::kTfi, 0));
  SampleStore store = sample_state(psi, 100000, 5, spec, 0);
  REQUIRE(store.samples.size() == 100000);
  CHECK(store.source == "vqe-sim");
  CHECK(store.model == Model::kTfi);
  std::map<std::string, int> counts;
  for (const BasisState &x : store.samples) ++counts[x.to_string()];
  REQUIRE(counts.size() == 4);
  for (auto &[s, c] : counts)
    CHECK_THAT(c / 100000.0, WithinAbs(0.25, 0.01));
}

TEST_CASE("sampled empirical distribution tracks the VQE state") {
  HamiltonianSpec spec = HamiltonianSpec::hubbard(1, 4);
  SectorBasis basis = half_filled_sector(spec);
  VqeSimulator sim(spec, basis);
  auto [ansatz, e] = sim.optimize(1, 3, 21);
  StateVector psi = sim.prepare(ansatz);
  Eigen::VectorXd p = psi.probabilities();

  SampleStore store = sample_state(psi, 100000, 9, spec, 1);
  CHECK(store.layers == 1);
  Eigen::VectorXd emp = Eigen::VectorXd::Zero(basis.size());
  for (const BasisState &x : store.samples) {
    REQUIRE(basis.contains(x));
    emp[static_cast<Eigen::Index>(basis.index(x))] += 1.0;
  }
  emp /= 100000.0;
  CHECK(tvd(emp, p) <= 0.02);

  // The small-n branch (inverse CDF) also lands inside the sector.
  SampleStore few = sample_state(psi, 30, 9, spec, 1);
  REQUIRE(few.samples.size() == 30);
  for (const BasisState &x : few.samples) CHECK(basis.contains(x));

  CHECK_THROWS_AS(sample_state(psi, 0, 9, spec, 1), std::invalid_argument);
}
