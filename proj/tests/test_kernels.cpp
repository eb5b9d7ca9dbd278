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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "cyclemeter/kernels.hpp"
#include "cyclemeter/sampler.hpp"

using namespace cyclemeter;
namespace k = cyclemeter::kernels;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> random_array(Rng& rng, std::size_t n, double lo, double hi, double p_neginf = 0.0) {
  std::vector<double> v(n);
  for (auto& x : v) {
    x = lo + (hi - lo) * rng.uniform();
    if (p_neginf > 0.0 && rng.uniform() < p_neginf) x = kNegInf;
  }
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("exp polynomial tracks std::exp to a few ulps") {
  Rng rng(1);
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = -700.0 + 1400.0 * rng.uniform();
    const double ref = std::exp(x);
    worst = std::max(worst, std::abs(k::exp_poly(x) - ref) / ref);
  }
  CHECK(worst < 4e-16);
  CHECK(k::exp_poly(0.0) == 1.0);
  CHECK(k::exp_poly(kNegInf) == 0.0);
  CHECK(k::exp_poly(-708.5) == 0.0);
  CHECK(std::isinf(k::exp_poly(709.5)));
  CHECK(std::isnan(k::exp_poly(std::nan(""))));
}

TEST_CASE("scalar log_sum_exp_rev matches a long double reference") {
  Rng rng(2);
  for (std::size_t n : {1u, 2u, 7u, 8u, 9u, 33u, 500u}) {
    const auto a = random_array(rng, n, -30.0, 30.0);
    const auto b = random_array(rng, n, -30.0, 30.0);
    long double m = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) m = std::max<long double>(m, a[i] + b[n - 1 - i]);
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) s += std::exp(static_cast<long double>(a[i] + b[n - 1 - i]) - m);
    const double ref = static_cast<double>(m + std::log(s));
    CHECK(k::scalar_table().log_sum_exp_rev(a.data(), b.data(), n) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("all -inf terms give -inf, a single finite term is exact") {
  std::vector<double> a{kNegInf, kNegInf, kNegInf}, b{0.0, 1.0, 2.0};
  CHECK(k::log_sum_exp_rev(a.data(), b.data(), 3) == kNegInf);
  a[1] = 0.25;
  CHECK(k::log_sum_exp_rev(a.data(), b.data(), 3) == 1.25);
  CHECK(k::log_sum_exp_rev(a.data(), b.data(), 0) == kNegInf);
}

TEST_CASE("dot_rev pairs a[i] with b[n-1-i]") {
  std::vector<double> a{1, 2, 3}, b{10, 100, 1000};
  CHECK(k::dot_rev(a.data(), b.data(), 3) == 1 * 1000 + 2 * 100 + 3 * 10);
}

TEST_CASE("cdf_search_rev returns the first crossing index") {
  // exp terms are 0.1, 0.2, 0.3, 0.4 in scan order
  std::vector<double> a{std::log(0.1), std::log(0.2), std::log(0.3), std::log(0.4)};
  std::vector<double> b(4, 0.0);
  double cum = 0.0;
  CHECK(k::cdf_search_rev(a.data(), b.data(), 4, 0.0, 0.05, &cum) == 0);
  CHECK(k::cdf_search_rev(a.data(), b.data(), 4, 0.0, 0.35, &cum) == 2);
  CHECK(cum == doctest::Approx(0.6));
  CHECK(k::cdf_search_rev(a.data(), b.data(), 4, 0.0, 2.0, &cum) == 4);
  CHECK(cum == doctest::Approx(1.0));
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  const k::KernelTable* wide = k::avx2_table();
  if (!wide || !k::cpu_has_avx2()) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  const k::KernelTable& ref = k::scalar_table();
  Rng rng(3);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      const double p_inf = rep % 3 == 0 ? 0.3 : 0.0;
      const auto a = random_array(rng, n, -50.0, 50.0, p_inf);
      const auto b = random_array(rng, n, -50.0, 50.0, p_inf);
      REQUIRE(same_bits(ref.log_sum_exp_rev(a.data(), b.data(), n),
                        wide->log_sum_exp_rev(a.data(), b.data(), n)));
      REQUIRE(same_bits(ref.dot_rev(a.data(), b.data(), n), wide->dot_rev(a.data(), b.data(), n)));
      std::vector<double> o1(n), o2(n);
      ref.exp_shifted_rev(a.data(), b.data(), n, 3.5, o1.data());
      wide->exp_shifted_rev(a.data(), b.data(), n, 3.5, o2.data());
      for (std::size_t i = 0; i < n; ++i) REQUIRE(same_bits(o1[i], o2[i]));
    }
  }
  // Full exp range including the cutoffs.
  const auto x = random_array(rng, 4099, -760.0, 760.0, 0.01);
  std::vector<double> o1(x.size()), o2(x.size());
  ref.exp_array(x.data(), x.size(), o1.data());
  wide->exp_array(x.data(), x.size(), o2.data());
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(same_bits(o1[i], o2[i]));
  const auto y = random_array(rng, 5000, -1.0, 1.0);
  REQUIRE(same_bits(ref.log_sum_exp_rev(x.data(), y.data(), 4099),
                    wide->log_sum_exp_rev(x.data(), y.data(), 4099)));
}

TEST_CASE("cdf_search_rev agrees across dispatch targets") {
  if (!k::avx2_table() || !k::cpu_has_avx2()) return;
  Rng rng(4);
  const auto a = random_array(rng, 3000, -12.0, -6.0);
  const auto b = random_array(rng, 3000, -1.0, 1.0);
  std::vector<std::size_t> r1, r2;
  std::vector<double> c1, c2;
  for (auto isa : {k::Isa::Scalar, k::Isa::Avx2}) {
    k::force(isa);
    auto& r = isa == k::Isa::Scalar ? r1 : r2;
    auto& c = isa == k::Isa::Scalar ? c1 : c2;
    Rng targets(5);
    for (int i = 0; i < 200; ++i) {
      double cum = 0.0;
      r.push_back(k::cdf_search_rev(a.data(), b.data(), 3000, 0.0, targets.uniform() * 2.0, &cum));
      c.push_back(cum);
    }
  }
  k::force(k::Isa::Avx2);
  CHECK(r1 == r2);
  for (std::size_t i = 0; i < c1.size(); ++i) CHECK(same_bits(c1[i], c2[i]));
}
