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

// Reduction kernels behind every O(N^2) recursion in the library.
//
// Each kernel has a portable scalar reference and an AVX2+FMA variant. Both
// accumulate into eight interleaved partial sums combined by the same fixed
// tree and share one exp polynomial, so their results are bit-identical.

#include <cstddef>

namespace cyclemeter::kernels {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  Isa isa;
  // log sum_i exp(a[i] + b[n-1-i]); -inf when every term is -inf.
  double (*log_sum_exp_rev)(const double* a, const double* b, std::size_t n);
  // sum_i a[i] * b[n-1-i]
  double (*dot_rev)(const double* a, const double* b, std::size_t n);
  // out[i] = exp(a[i] + b[n-1-i] - shift)
  void (*exp_shifted_rev)(const double* a, const double* b, std::size_t n,
                          double shift, double* out);
  // exp elementwise, with the shared polynomial.
  void (*exp_array)(const double* x, std::size_t n, double* out);
};

const KernelTable& scalar_table();
// Null when the AVX2 translation unit was not built.
const KernelTable* avx2_table();

// Picks AVX2 when the CPU has AVX2 and FMA. CYCLEMETER_ISA=scalar|avx2
// overrides; asking for avx2 on a CPU without it falls back to scalar.
const KernelTable& active();
bool cpu_has_avx2();
const char* isa_name(Isa isa);

// Forces a specific table for the rest of the process. Tests only.
void force(Isa isa);

inline double log_sum_exp_rev(const double* a, const double* b, std::size_t n) {
  return active().log_sum_exp_rev(a, b, n);
}
inline double dot_rev(const double* a, const double* b, std::size_t n) {
  return active().dot_rev(a, b, n);
}
inline void exp_shifted_rev(const double* a, const double* b, std::size_t n,
                            double shift, double* out) {
  active().exp_shifted_rev(a, b, n, shift, out);
}

// Sequential cumulative scan of exp(a[i] + b[n-1-i] - shift). Returns the
// first index whose running sum exceeds target, or n. The running total up
// to and including that index is written to *cumulative when non-null.
std::size_t cdf_search_rev(const double* a, const double* b, std::size_t n,
                           double shift, double target, double* cumulative);

// Scalar version of the shared exp; agrees bitwise with the kernels.
double exp_poly(double x);

}  // namespace cyclemeter::kernels
