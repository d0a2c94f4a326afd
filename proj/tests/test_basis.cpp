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

#include <set>

#include "catch2/catch_amalgamated.hpp"
#include "qevmc/rng.hpp"
#include "qevmc/sector_basis.hpp"

using namespace qevmc;

TEST_CASE("BasisState bit operations across the word boundary") {
  BasisState x(96);
  for (int i : {0, 5, 63, 64, 70, 95}) x.set(i);
  for (int i : {0, 5, 63, 64, 70, 95}) CHECK(x.test(i));
  CHECK_FALSE(x.test(1));
  CHECK_FALSE(x.test(65));
  CHECK(x.popcount() == 6);

  x.flip(64);
  CHECK_FALSE(x.test(64));
  x.flip(64);
  CHECK(x.test(64));
  x.clear(63);
  CHECK_FALSE(x.test(63));
  CHECK(x.popcount() == 6 - 1 + 1 - 1);
}

TEST_CASE("popcount_range matches a bit-by-bit count") {
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    BasisState x(100);
    for (int i = 0; i < 100; ++i)
      if (rng.next_u64() & 1u) x.set(i);
    const std::vector<std::pair<int, int>> ranges = {
        {0, 100}, {3, 64}, {64, 100}, {60, 70}, {17, 17}, {0, 1}, {63, 65}};
    for (auto [a, b] : ranges) {
      int manual = 0;
      for (int i = a; i < b; ++i)
        if (x.test(i)) ++manual;
      CHECK(x.popcount_range(a, b) == manual);
    }
  }
}

TEST_CASE("string round trip and spin convention") {
  BasisState x = BasisState::from_string("0110");
  CHECK(x.width() == 4);
  CHECK(x.to_string() == "0110");
  CHECK(x.spin(0) == 1);   // bit 0 -> sigma^z = +1
  CHECK(x.spin(1) == -1);  // bit 1 -> sigma^z = -1
  CHECK_THROWS_AS(BasisState::from_string("01x0"), std::invalid_argument);
  CHECK_THROWS_AS(BasisState::from_string(std::string(200, '0')),
                  std::invalid_argument);
}

TEST_CASE("double_occupancy counts overlapping site occupations") {
  // up bits {0,1}, down bits {0,2}, L = 4 -> one doubly occupied site
  BasisState x = BasisState::from_string("11001010");
  CHECK(double_occupancy(x, 4) == 1);

  CHECK(double_occupancy(BasisState(8), 4) == 0);
  CHECK(double_occupancy(BasisState::from_string("11111111"), 4) == 4);
  CHECK_THROWS_AS(double_occupancy(BasisState(7), 4), std::invalid_argument);
}

TEST_CASE("double_occupancy agrees with a naive loop for wide states") {
  Rng rng(7);
  for (int L : {4, 8, 32, 60, 64}) {
    for (int trial = 0; trial < 20; ++trial) {
      BasisState x(2 * L);
      for (int i = 0; i < 2 * L; ++i)
        if (rng.next_u64() & 1u) x.set(i);
      int manual = 0;
      for (int k = 0; k < L; ++k)
        if (x.test(k) && x.test(L + k)) ++manual;
      CHECK(double_occupancy(x, L) == manual);
    }
  }
}

TEST_CASE("half-filled sector sizes match binomial counts") {
  SectorBasis b4 = half_filled_sector(HamiltonianSpec::hubbard(1, 4));
  CHECK(b4.size() == 36);  // C(4,2)^2
  SectorBasis b8 = half_filled_sector(HamiltonianSpec::hubbard(1, 8));
  CHECK(b8.size() == 4900);  // C(8,4)^2
}

TEST_CASE("sector basis is sorted, duplicate-free, and index-consistent") {
  SectorBasis basis = half_filled_sector(HamiltonianSpec::hubbard(1, 4));
  std::set<std::string> seen;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const BasisState &x = basis.state(k);
    CHECK(x.popcount_range(0, 4) == 2);
    CHECK(x.popcount_range(4, 8) == 2);
    CHECK(basis.index(x) == k);
    seen.insert(x.to_string());
    if (k > 0) CHECK(basis.state(k - 1) < x);
  }
  CHECK(seen.size() == basis.size());

  BasisState outside = BasisState::from_string("11110000");
  CHECK_FALSE(basis.contains(outside));
  CHECK_THROWS_AS(basis.index(outside), std::out_of_range);
}

TEST_CASE("2-spin TFI all-spins basis enumerates the full register") {
  SectorBasis basis =
      enumerate_sector(HamiltonianSpec::tfi(2), SectorConstraint::all_spins());
  REQUIRE(basis.size() == 4);
  CHECK(basis.state(0).to_string() == "00");
  CHECK(basis.state(1).to_string() == "10");  // packed value 1 = bit 0 set
  CHECK(basis.state(2).to_string() == "01");
  CHECK(basis.state(3).to_string() == "11");
}

TEST_CASE("sector enumeration rejects inconsistent or oversized requests") {
  HamiltonianSpec hub = HamiltonianSpec::hubbard(1, 4);
  CHECK_THROWS_AS(enumerate_sector(hub, SectorConstraint::fixed_fill(5, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_sector(hub, SectorConstraint::all_spins()),
                  std::invalid_argument);
  HamiltonianSpec big = HamiltonianSpec::hubbard(1, 40);
  CHECK_THROWS_AS(
      enumerate_sector(big, SectorConstraint::fixed_fill(20, 20)),
      std::invalid_argument);
  HamiltonianSpec tfi_big = HamiltonianSpec::tfi(28);
  CHECK_THROWS_AS(enumerate_sector(tfi_big, SectorConstraint::all_spins()),
                  std::invalid_argument);
}
