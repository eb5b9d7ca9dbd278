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

#include <bit>
#include <iterator>
#include <cmath>
#include <cstdint>
#include <limits>

#include "cyclemeter/kernels.hpp"
#include "internal.hpp"

namespace cyclemeter::kernels {

using namespace detail;

double exp_poly(double x) {
  if (std::isnan(x)) return x;
  if (x < kExpLow) return 0.0;
  if (x > kExpHigh) return std::numeric_limits<double>::infinity();
  const double k = std::nearbyint(x * kLog2e);
  double r = std::fma(-k, kLn2Hi, x);
  r = std::fma(-k, kLn2Lo, r);
  double p = kExpCoeff[0];
  for (std::size_t j = 1; j < std::size(kExpCoeff); ++j) p = std::fma(p, r, kExpCoeff[j]);
  p = std::fma(p, r, 1.0);
  p = std::fma(p, r, 1.0);
  const auto bits = static_cast<std::uint64_t>(static_cast<std::int64_t>(k) + 1023) << 52;
  return p * std::bit_cast<double>(bits);
}

namespace {

double combine(const double* s) {
  return ((s[0] + s[4]) + (s[1] + s[5])) + ((s[2] + s[6]) + (s[3] + s[7]));
}

double max_rev(const double* a, const double* b, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double v = a[i] + b[n - 1 - i];
    if (v > m) m = v;
  }
  return m;
}

double lse_rev(const double* a, const double* b, std::size_t n) {
  const double m = max_rev(a, b, n);
  if (std::isinf(m)) return m;
  double s[kLanes] = {};
  for (std::size_t i = 0; i < n; ++i) s[i % kLanes] += exp_poly((a[i] + b[n - 1 - i]) - m);
  return m + std::log(combine(s));
}

double dot_rev_scalar(const double* a, const double* b, std::size_t n) {
  double s[kLanes] = {};
  for (std::size_t i = 0; i < n; ++i) s[i % kLanes] = std::fma(a[i], b[n - 1 - i], s[i % kLanes]);
  return combine(s);
}

void exp_shifted_rev_scalar(const double* a, const double* b, std::size_t n, double shift,
                            double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_poly((a[i] + b[n - 1 - i]) - shift);
}

void exp_array_scalar(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_poly(x[i]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, lse_rev, dot_rev_scalar, exp_shifted_rev_scalar,
                                 exp_array_scalar};
  return table;
}

}  // namespace cyclemeter::kernels
