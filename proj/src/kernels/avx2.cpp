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

#include <immintrin.h>

#include <cmath>
#include <iterator>
#include <limits>

#include "cyclemeter/kernels.hpp"
#include "internal.hpp"

namespace cyclemeter::kernels {

using namespace detail;

namespace {

// Same polynomial and reduction as exp_poly, four lanes at a time.
inline __m256d exp4(__m256d x) {
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2e)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);
  __m256d p = _mm256_set1_pd(kExpCoeff[0]);
  for (std::size_t j = 1; j < std::size(kExpCoeff); ++j)
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpCoeff[j]));
  const __m256d one = _mm256_set1_pd(1.0);
  p = _mm256_fmadd_pd(p, r, one);
  p = _mm256_fmadd_pd(p, r, one);

  // Out-of-range lanes produce garbage exponents here; they are blended away.
  const __m256d kc = _mm256_min_pd(_mm256_max_pd(k, _mm256_set1_pd(-1022.0)),
                                   _mm256_set1_pd(1023.0));
  __m256i ki = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(kc));
  ki = _mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52);
  __m256d y = _mm256_mul_pd(p, _mm256_castsi256_pd(ki));

  const __m256d lo = _mm256_cmp_pd(x, _mm256_set1_pd(kExpLow), _CMP_LT_OQ);
  const __m256d hi = _mm256_cmp_pd(x, _mm256_set1_pd(kExpHigh), _CMP_GT_OQ);
  y = _mm256_blendv_pd(y, _mm256_setzero_pd(), lo);
  y = _mm256_blendv_pd(y, _mm256_set1_pd(std::numeric_limits<double>::infinity()), hi);
  const __m256d nan = _mm256_cmp_pd(x, x, _CMP_UNORD_Q);
  return _mm256_blendv_pd(y, x, nan);
}

inline __m256d load_rev(const double* p) {
  return _mm256_permute4x64_pd(_mm256_loadu_pd(p), 0x1B);
}

double combine(const double* s) {
  return ((s[0] + s[4]) + (s[1] + s[5])) + ((s[2] + s[6]) + (s[3] + s[7]));
}

double max_rev(const double* a, const double* b, std::size_t n) {
  __m256d m0 = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    m0 = _mm256_max_pd(m0, _mm256_add_pd(_mm256_loadu_pd(a + i), load_rev(b + n - 4 - i)));
  alignas(32) double t[4];
  _mm256_store_pd(t, m0);
  double m = t[0];
  for (int j = 1; j < 4; ++j)
    if (t[j] > m) m = t[j];
  for (; i < n; ++i) {
    const double v = a[i] + b[n - 1 - i];
    if (v > m) m = v;
  }
  return m;
}

double lse_rev(const double* a, const double* b, std::size_t n) {
  const double m = max_rev(a, b, n);
  if (std::isinf(m)) return m;
  const __m256d vm = _mm256_set1_pd(m);
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d x0 = _mm256_sub_pd(
        _mm256_add_pd(_mm256_loadu_pd(a + i), load_rev(b + n - 4 - i)), vm);
    const __m256d x1 = _mm256_sub_pd(
        _mm256_add_pd(_mm256_loadu_pd(a + i + 4), load_rev(b + n - 8 - i)), vm);
    s0 = _mm256_add_pd(s0, exp4(x0));
    s1 = _mm256_add_pd(s1, exp4(x1));
  }
  alignas(32) double s[kLanes];
  _mm256_store_pd(s, s0);
  _mm256_store_pd(s + 4, s1);
  for (; i < n; ++i) s[i % kLanes] += exp_poly((a[i] + b[n - 1 - i]) - m);
  return m + std::log(combine(s));
}

double dot_rev_avx2(const double* a, const double* b, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), load_rev(b + n - 4 - i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), load_rev(b + n - 8 - i), s1);
  }
  alignas(32) double s[kLanes];
  _mm256_store_pd(s, s0);
  _mm256_store_pd(s + 4, s1);
  for (; i < n; ++i) s[i % kLanes] = std::fma(a[i], b[n - 1 - i], s[i % kLanes]);
  return combine(s);
}

void exp_shifted_rev_avx2(const double* a, const double* b, std::size_t n, double shift,
                          double* out) {
  const __m256d vs = _mm256_set1_pd(shift);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x =
        _mm256_sub_pd(_mm256_add_pd(_mm256_loadu_pd(a + i), load_rev(b + n - 4 - i)), vs);
    _mm256_storeu_pd(out + i, exp4(x));
  }
  for (; i < n; ++i) out[i] = exp_poly((a[i] + b[n - 1 - i]) - shift);
}

void exp_array_avx2(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, exp4(_mm256_loadu_pd(x + i)));
  for (; i < n; ++i) out[i] = exp_poly(x[i]);
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Isa::Avx2, lse_rev, dot_rev_avx2, exp_shifted_rev_avx2,
                                 exp_array_avx2};
  return &table;
}

}  // namespace cyclemeter::kernels
