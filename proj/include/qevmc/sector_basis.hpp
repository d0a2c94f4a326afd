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

#ifndef QEVMC_SECTOR_BASIS_HPP
#define QEVMC_SECTOR_BASIS_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qevmc/basis_state.hpp"
#include "qevmc/lattice.hpp"

namespace qevmc {

/// Symmetry-sector constraint: fixed per-spin particle numbers (Hubbard)
/// or the full 2^N spin space (TFI).
struct SectorConstraint {
  enum class Kind { kFixedFill, kAllSpins };
  Kind kind = Kind::kAllSpins;
  int n_up = 0;
  int n_down = 0;

  static SectorConstraint fixed_fill(int n_up, int n_down) {
    return {Kind::kFixedFill, n_up, n_down};
  }
  static SectorConstraint all_spins() { return {Kind::kAllSpins, 0, 0}; }
};

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Number of doubly occupied sites, D(x) = sum_k n_ku * n_kd.
inline int double_occupancy(const BasisState &x, int L) {
  if (x.width() != 2 * L)
    throw std::invalid_argument("double_occupancy: width != 2L");
  if (L <= 64) {
    std::uint64_t mask = (L == 64) ? ~0ULL : ((1ULL << L) - 1);
    std::uint64_t up = x.lo() & mask;
    std::uint64_t down;
    if (L == 64)
      down = x.hi();  // lo() >> 64 would be undefined
    else if (2 * L <= 64)
      down = (x.lo() >> L) & mask;
    else
      down = ((x.lo() >> L) | (x.hi() << (64 - L))) & mask;
    return std::popcount(up & down);
  }
  int d = 0;
  for (int k = 0; k < L; ++k)
    if (x.test(k) && x.test(L + k)) ++d;
  return d;
}

/**
 * Enumerated, index-addressable basis of one symmetry sector.
 * States are sorted ascending by packed value; index(states[k]) == k.
 */
class SectorBasis {
 public:
  SectorBasis() = default;
  SectorBasis(std::vector<BasisState> states, SectorConstraint constraint,
              int width)
      : states_(std::move(states)), constraint_(constraint), width_(width) {}

  std::size_t size() const { return states_.size(); }
  int width() const { return width_; }
  const SectorConstraint &constraint() const { return constraint_; }
  const BasisState &state(std::size_t k) const { return states_[k]; }
  const std::vector<BasisState> &states() const { return states_; }

  std::size_t index(const BasisState &x) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), x);
    if (it == states_.end() || !(*it == x))
      throw std::out_of_range("state not in sector basis");
    return static_cast<std::size_t>(it - states_.begin());
  }

  bool contains(const BasisState &x) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), x);
    return it != states_.end() && *it == x;
  }

 private:
  std::vector<BasisState> states_;
  SectorConstraint constraint_;
  int width_ = 0;
};

namespace detail {

/// All n-bit words with k bits set, ascending (Gosper's hack successor).
inline std::vector<std::uint64_t> combinations(int n, int k) {
  std::vector<std::uint64_t> out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  if (k > n) return out;
  std::uint64_t v = (1ULL << k) - 1;
  std::uint64_t limit = (n == 64) ? ~0ULL : (1ULL << n);
  while (n == 64 || v < limit) {
    out.push_back(v);
    std::uint64_t t = v | (v - 1);
    std::uint64_t next = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    if (next <= v) break;  // wrapped
    v = next;
    if (n == 64 && out.size() > 0 && v == 0) break;
  }
  return out;
}

}  // namespace detail

/// Enumerates the sector basis for a Hamiltonian. Guarded at 2^27 states.
inline SectorBasis enumerate_sector(const HamiltonianSpec &spec,
                                    const SectorConstraint &constraint) {
  const int L = spec.lattice.sites();
  if (constraint.kind == SectorConstraint::Kind::kAllSpins) {
    if (spec.lattice.model != Model::kTfi)
      throw std::invalid_argument("all-spins constraint requires a TFI model");
    if (L > 27) throw std::invalid_argument("sector too large (> 2^27 states)");
    std::vector<BasisState> states;
    states.reserve(1ULL << L);
    for (std::uint64_t v = 0; v < (1ULL << L); ++v)
      states.emplace_back(L, v);
    return SectorBasis(std::move(states), constraint, L);
  }

  if (spec.lattice.model != Model::kHubbard)
    throw std::invalid_argument("fixed-fill constraint requires a Hubbard model");
  if (constraint.n_up > L || constraint.n_down > L || constraint.n_up < 0 ||
      constraint.n_down < 0)
    throw std::invalid_argument("inconsistent fill constraint (n > L)");
  double est = binomial(L, constraint.n_up) * binomial(L, constraint.n_down);
  if (est > static_cast<double>(1ULL << 27))
    throw std::invalid_argument("sector too large (> 2^27 states)");
  if (2 * L > BasisState::kCapacity)
    throw std::invalid_argument("lattice exceeds bit capacity");

  auto ups = detail::combinations(L, constraint.n_up);
  auto downs = detail::combinations(L, constraint.n_down);
  std::vector<BasisState> states;
  states.reserve(ups.size() * downs.size());
  // Down bits are the high half, so iterating downs in the outer loop keeps
  // the packed values ascending.
  for (auto d : downs)
    for (auto u : ups) {
      BasisState x(2 * L);
      if (2 * L <= 64) {
        x = BasisState(2 * L, u | (d << L));
      } else if (L <= 64) {
        std::uint64_t lo = u;
        std::uint64_t hi = 0;
        if (L < 64) {
          lo |= (d << L);
          hi = d >> (64 - L);
        } else {
          hi = d;
        }
        x = BasisState(2 * L, lo, hi);
      }
      states.push_back(x);
    }
  std::sort(states.begin(), states.end());
  return SectorBasis(std::move(states), constraint, 2 * L);
}

/// The half-filled sector (n_up = n_down = L/2, L electrons in total).
inline SectorBasis half_filled_sector(const HamiltonianSpec &spec) {
  const int L = spec.lattice.sites();
  return enumerate_sector(spec, SectorConstraint::fixed_fill(L / 2, L - L / 2));
}

}  // namespace qevmc

#endif  // QEVMC_SECTOR_BASIS_HPP
