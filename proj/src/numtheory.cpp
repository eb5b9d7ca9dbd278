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

#include "cyclemeter/numtheory.hpp"

#include <cmath>
#include <numeric>

#include "cyclemeter/error.hpp"

namespace cyclemeter {

MangoldtTable MangoldtTable::build(std::size_t limit, std::size_t ceiling) {
  if (limit == 0) fail(ErrorKind::Capacity, "mangoldt table limit must be >= 1");
  if (limit > ceiling)
    fail(ErrorKind::Capacity, "mangoldt table limit " + std::to_string(limit) +
                                  " exceeds ceiling " + std::to_string(ceiling));
  MangoldtTable t;
  t.spf_.assign(limit + 1, 0);
  t.values_.assign(limit + 1, 0.0);
  t.psi_.assign(limit + 1, 0.0);

  // Linear sieve for smallest prime factors.
  std::vector<std::uint32_t> primes;
  for (std::size_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] == 0) {
      t.spf_[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      const std::size_t q = i * p;
      if (p > t.spf_[i] || q > limit) break;
      t.spf_[q] = p;
    }
  }
  for (std::uint32_t p : primes) {
    const double lp = std::log(static_cast<double>(p));
    for (std::size_t q = p; q <= limit; q *= p) {
      t.values_[q] = lp;
      if (q > limit / p) break;
    }
  }
  // Neumaier summation keeps psi within a few ulps of log lcm(1..x).
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 1; k <= limit; ++k) {
    const double v = t.values_[k];
    const double s = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - s) + v : (v - s) + sum;
    sum = s;
    t.psi_[k] = sum + comp;
  }
  return t;
}

double MangoldtTable::lambda(std::size_t k) const {
  if (k > limit()) fail(ErrorKind::Range, "index beyond mangoldt table");
  return values_[k];
}

std::uint32_t MangoldtTable::prime_power_base(std::size_t k) const {
  if (k < 2 || k > limit()) return 0;
  const std::uint32_t p = spf_[k];
  while (k % p == 0) k /= p;
  return k == 1 ? p : 0;
}

std::vector<std::pair<std::uint32_t, unsigned>> MangoldtTable::factorize(std::size_t k) const {
  if (k > limit()) fail(ErrorKind::Range, "index beyond mangoldt table");
  std::vector<std::pair<std::uint32_t, unsigned>> out;
  while (k > 1) {
    const std::uint32_t p = spf_[k];
    unsigned e = 0;
    while (k % p == 0) {
      k /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

double chebyshev_psi(const MangoldtTable& table, std::size_t x) {
  if (x > table.limit())
    fail(ErrorKind::Range, "psi(" + std::to_string(x) + ") beyond table limit " +
                               std::to_string(table.limit()));
  return table.psi_prefix()[x];
}

u128 exact_lcm(std::span<const std::uint64_t> values) {
  if (values.empty()) fail(ErrorKind::Validation, "exact_lcm needs at least one value");
  u128 acc = 1;
  for (std::uint64_t v : values) {
    if (v == 0) fail(ErrorKind::Validation, "exact_lcm values must be positive");
    u128 a = acc, b = v;
    while (b != 0) {
      const u128 r = a % b;
      a = b;
      b = r;
    }
    const u128 step = static_cast<u128>(v) / a;
    u128 next;
    if (__builtin_mul_overflow(acc, step, &next))
      fail(ErrorKind::Overflow, "lcm exceeds 128 bits");
    acc = next;
  }
  return acc;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

double to_double(u128 v) { return static_cast<double>(v); }

}  // namespace cyclemeter
