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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string_view>
#include <vector>

#include "cyclemeter/kernels.hpp"

namespace cyclemeter::kernels {

#ifndef CYCLEMETER_HAVE_AVX2
const KernelTable* avx2_table() { return nullptr; }
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

namespace {

const KernelTable* pick() {
  const KernelTable* wide = cpu_has_avx2() ? avx2_table() : nullptr;
  if (const char* env = std::getenv("CYCLEMETER_ISA")) {
    if (std::string_view(env) == "scalar") return &scalar_table();
  }
  return wide ? wide : &scalar_table();
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() {
  const KernelTable* t = g_active.load(std::memory_order_acquire);
  if (!t) {
    t = pick();
    g_active.store(t, std::memory_order_release);
  }
  return *t;
}

void force(Isa isa) {
  const KernelTable* t = &scalar_table();
  if (isa == Isa::Avx2 && cpu_has_avx2() && avx2_table()) t = avx2_table();
  g_active.store(t, std::memory_order_release);
}

std::size_t cdf_search_rev(const double* a, const double* b, std::size_t n, double shift,
                           double target, double* cumulative) {
  // Chunks grow geometrically: most scans stop early, a few run long.
  constexpr std::size_t kMinChunk = 16, kMaxChunk = 1024;
  thread_local std::vector<double> buf(kMaxChunk);
  double acc = 0.0;
  std::size_t chunk = kMinChunk;
  for (std::size_t start = 0; start < n; start += chunk, chunk = std::min(2 * chunk, kMaxChunk)) {
    const std::size_t len = std::min(chunk, n - start);
    // Element i of the full scan pairs a[i] with b[n-1-i].
    exp_shifted_rev(a + start, b + (n - start - len), len, shift, buf.data());
    for (std::size_t j = 0; j < len; ++j) {
      acc += buf[j];
      if (acc > target) {
        if (cumulative) *cumulative = acc;
        return start + j;
      }
    }
  }
  if (cumulative) *cumulative = acc;
  return n;
}

}  // namespace cyclemeter::kernels
