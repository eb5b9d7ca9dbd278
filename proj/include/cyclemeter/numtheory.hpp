// Copyright 2026 The cyclemeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cyclemeter {

using u128 = unsigned __int128;

inline constexpr std::size_t kMangoldtCeiling = 100'000'000;

// Sieve-backed von Mangoldt values and Chebyshev prefix sums on 0..limit.
class MangoldtTable {
 public:
  static MangoldtTable build(std::size_t limit, std::size_t ceiling = kMangoldtCeiling);

  std::size_t limit() const { return values_.size() - 1; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& psi_prefix() const { return psi_; }
  double lambda(std::size_t k) const;

  // p when k = p^j with j >= 1, else 0.
  std::uint32_t prime_power_base(std::size_t k) const;
  std::uint32_t smallest_prime_factor(std::size_t k) const { return spf_.at(k); }
  // (p, e) pairs in increasing p; empty for k = 1.
  std::vector<std::pair<std::uint32_t, unsigned>> factorize(std::size_t k) const;

 private:
  std::vector<double> values_;
  std::vector<double> psi_;
  std::vector<std::uint32_t> spf_;
};

inline MangoldtTable build_mangoldt_table(std::size_t limit,
                                          std::size_t ceiling = kMangoldtCeiling) {
  return MangoldtTable::build(limit, ceiling);
}

double chebyshev_psi(const MangoldtTable& table, std::size_t x);

// Throws ErrorKind::Overflow when the result does not fit in 128 bits.
u128 exact_lcm(std::span<const std::uint64_t> values);

std::string to_string(u128 v);
double to_double(u128 v);

}  // namespace cyclemeter
