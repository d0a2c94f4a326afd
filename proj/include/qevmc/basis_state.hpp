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

#ifndef QEVMC_BASIS_STATE_HPP
#define QEVMC_BASIS_STATE_HPP

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qevmc {

/**
 * Bit-packed computational-basis configuration, capacity 128 bits.
 *
 * Conventions used throughout:
 *  - Hubbard: bits 0..L-1 are spin-up site occupations (site i <-> bit i),
 *    bits L..2L-1 are spin-down.
 *  - TFI: bit j <-> spin j; bit value 1 <-> sigma^z = -1, bit 0 <-> +1.
 */
class BasisState {
 public:
  static constexpr int kCapacity = 128;

  BasisState() = default;
  explicit BasisState(int width, std::uint64_t lo = 0, std::uint64_t hi = 0)
      : lo_(lo), hi_(hi), width_(width) {
    assert(width >= 0 && width <= kCapacity);
  }

  int width() const { return width_; }
  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }

  bool test(int i) const {
    return i < 64 ? ((lo_ >> i) & 1u) : ((hi_ >> (i - 64)) & 1u);
  }
  void set(int i) {
    if (i < 64)
      lo_ |= (1ULL << i);
    else
      hi_ |= (1ULL << (i - 64));
  }
  void clear(int i) {
    if (i < 64)
      lo_ &= ~(1ULL << i);
    else
      hi_ &= ~(1ULL << (i - 64));
  }
  void flip(int i) {
    if (i < 64)
      lo_ ^= (1ULL << i);
    else
      hi_ ^= (1ULL << (i - 64));
  }

  int popcount() const { return std::popcount(lo_) + std::popcount(hi_); }

  /// Number of set bits in positions [lo, hi) (half-open).
  int popcount_range(int first, int last) const {
    assert(first <= last);
    int count = 0;
    if (first < 64) {
      int stop = last < 64 ? last : 64;
      std::uint64_t mask = (stop == 64 ? ~0ULL : ((1ULL << stop) - 1)) &
                           ~((first == 0) ? 0ULL : ((1ULL << first) - 1));
      count += std::popcount(lo_ & mask);
    }
    if (last > 64) {
      int start = first > 64 ? first - 64 : 0;
      int stop = last - 64;
      std::uint64_t mask = (stop == 64 ? ~0ULL : ((1ULL << stop) - 1)) &
                           ~((start == 0) ? 0ULL : ((1ULL << start) - 1));
      count += std::popcount(hi_ & mask);
    }
    return count;
  }

  /// TFI spin value at site j: +1 for bit 0, -1 for bit 1.
  int spin(int j) const { return test(j) ? -1 : 1; }

  friend auto operator<=>(const BasisState &a, const BasisState &b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }
  friend bool operator==(const BasisState &a, const BasisState &b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

  /// ASCII 0/1, site 0 leftmost. Hubbard stores use up|down split externally.
  std::string to_string() const {
    std::string s(width_, '0');
    for (int i = 0; i < width_; ++i)
      if (test(i)) s[i] = '1';
    return s;
  }

  static BasisState from_string(const std::string &s) {
    if (s.size() > kCapacity)
      throw std::invalid_argument("bitstring exceeds capacity");
    BasisState x(static_cast<int>(s.size()));
    for (int i = 0; i < static_cast<int>(s.size()); ++i) {
      if (s[i] == '1')
        x.set(i);
      else if (s[i] != '0')
        throw std::invalid_argument("bitstring contains non-0/1 character");
    }
    return x;
  }

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  int width_ = 0;
};

}  // namespace qevmc

#endif  // QEVMC_BASIS_STATE_HPP
