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
#include <complex>
#include <fstream>
#include <numbers>

#include "cyclemeter/asymptotics.hpp"
#include "cyclemeter/error.hpp"
#include "cyclemeter/sampler.hpp"
#include "cyclemeter/series.hpp"

using namespace cyclemeter;
using cd = std::complex<double>;

namespace {

const ZetaZeros& zeros() {
  static const auto z = ZetaZeros::bundled();
  return z;
}

bool close(cd a, cd b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("complex log gamma") {
  CHECK(close(complex_log_gamma(5.0), std::log(24.0), 1e-14));
  CHECK(close(complex_log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-14));
  // Reference values from an arbitrary-precision loggamma.
  CHECK(close(complex_log_gamma({3, 4}), {-1.7566267846037841105, 4.7426644380346579282}, 1e-13));
  CHECK(close(complex_log_gamma({-2.5, 1}), {-2.3441906524655925559, -8.3041279866579258844}, 1e-13));
  CHECK(close(complex_log_gamma({0.5, 100}), {-156.16069414628498918, 360.51743526790643592}, 1e-13));
  CHECK(close(complex_log_gamma({-0.5, -14.134725141734693790}),
              {-23.933095609815315607, -21.699789389773191234}, 1e-13));
  CHECK(close(complex_log_gamma({1e-3, 1e-3}), {6.5606044738375526187, -0.78597373492965343485}, 1e-13));
  for (double x = 0.1; x < 40.0; x += 0.37)
    CHECK(complex_log_gamma(x).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-12).scale(1e-13));
  CHECK_THROWS_AS(complex_log_gamma(0.0), Error);
  CHECK_THROWS_AS(complex_log_gamma(-3.0), Error);

  const cd z(-0.5, -14.134725);
  CHECK(std::isfinite(complex_log_gamma(z).real()));
  CHECK(std::abs(complex_log_gamma(z + 1.0) - complex_log_gamma(z) - std::log(z)) < 1e-10);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const cd w(-20.0 + 40.0 * rng.uniform(), -60.0 + 120.0 * rng.uniform());
    REQUIRE(std::abs(complex_log_gamma(w + 1.0) - complex_log_gamma(w) - std::log(w)) < 1e-10);
  }
}

TEST_CASE("zeta zeros table") {
  const auto& z = zeros();
  CHECK(z.count() == 100);
  CHECK(z.imag_parts()[0] == doctest::Approx(14.134725).epsilon(1e-7));
  for (std::size_t i = 1; i < z.count(); ++i) CHECK(z.imag_parts()[i] > z.imag_parts()[i - 1]);
  CHECK(z.first(50).count() == 50);
  const std::string bad = "/tmp/cyclemeter_bad_zeros.txt";
  std::ofstream(bad) << "# comment\n21.0\n14.1\n";
  CHECK_THROWS_AS(ZetaZeros::load(bad), Error);
}

TEST_CASE("h_n main terms") {
  for (double n : {1.0, 10.0, 1e4}) CHECK(h_asym_ge(1, 1, 0, n) == 0.0);
  CHECK(std::exp(h_asym_ge(1, 2, 0, 50)) == doctest::Approx(50.0));
  CHECK(h_asym_ge(2, 1, 0, 10) == doctest::Approx(-10 * std::log(2.0)));

  for (double n : {100.0, 1e4}) {
    const double fixed = -0.5 * std::log(2 * std::numbers::pi * 2.0) + 0.75 * std::log(1.0 / n);
    CHECK(h_asym_poly(1.0, n) - fixed == doctest::Approx(2 * std::sqrt(n)));
  }

  const auto t = h_table(WeightModel::polynomial(0.5), 10000);
  const double g3 = std::abs(t.log_h[1000] - h_asym_poly(0.5, 1000));
  const double g4 = std::abs(t.log_h[10000] - h_asym_poly(0.5, 10000));
  CHECK(g4 < g3);
}

TEST_CASE("Erdos-Turan standardization and local limit constants") {
  const double n = 1e4, ln = std::log(n);
  CHECK(erdos_turan_standardize(0.5 * ln * ln, n, 1.0) == 0.0);
  CHECK(erdos_turan_standardize(0.5 * ln * ln + std::sqrt(ln * ln * ln / 3), n, 1.0) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(erdos_turan_standardize(1.0, 1.5, 1.0), Error);

  const double lambda = 2 * std::sqrt(n);
  CHECK(erdos_turan_standardize_poly(lambda * ln / 4, n, 1.0) == doctest::Approx(0.0).scale(1e-9));

  CHECK(llt_constants(std::exp(64.0), 3.0).sigma == doctest::Approx(2.0));
  const auto c = llt_constants(std::exp(6.0), 1.0);
  CHECK(c.sigma == doctest::Approx(std::pow(6.0, 1.0 / 6) / std::sqrt(3.0)));
  CHECK(c.centering == doctest::Approx(18.0));
  CHECK(c.scale == doctest::Approx(std::pow(6.0, 4.0 / 3)));
}

TEST_CASE("mod-Gaussian pieces") {
  CHECK(mod_gaussian_limit(0.0, 2.0) == 1.0);
  CHECK(mod_gaussian_limit(1.0, 1.0) == doctest::Approx(std::exp(1.0 / 18)));
  CHECK(mgf_trunc_asym(0.0, 1000, 2.0) == cd(1.0));
  CHECK(std::abs(mgf_trunc_asym(1e-9, 1000, 2.0) - 1.0) < 1e-8);
  const double lb = std::log(20.0);
  CHECK(mgf_trunc_asym(1.0, 1000, 2.0).real() == doctest::Approx(std::exp(2 * lb * (std::exp(1.0) - 2))));
  CHECK(mgf_trunc_asym(1.0, 1000, 1.0, Form::Literal) == mgf_trunc_asym(1.0, 1000, 1.0));
  CHECK(mgf_trunc_asym(1.0, 1000, 2.0, Form::Literal) != mgf_trunc_asym(1.0, 1000, 2.0));
  // Series and closed form agree at the switch point.
  for (double s : {0.4999999, 0.3, -0.49, 1e-3}) {
    const double closed = (std::exp(s) - 1.0 - s) / s;
    CHECK(excess_exp_ratio(s).real() == doctest::Approx(closed).epsilon(1e-12));
  }
}

TEST_CASE("rate functions") {
  const auto ge = RateFamily::ge(1.0);
  CHECK(chi(ge, 0.0) == 0.0);
  CHECK(chi_prime(ge, 0.0) == doctest::Approx(0.5));
  CHECK(rate_function(ge, 0.5) == doctest::Approx(0.0).scale(1e-12));
  CHECK(chi(ge, 1.0) == doctest::Approx(std::exp(1.0) - 2).epsilon(1e-14));
  CHECK(chi(RateFamily::ge(2.0), 1.0) == doctest::Approx(2 * (std::exp(1.0) - 2)));
  CHECK(chi(RateFamily::ge(2.0, Form::Literal), 1.0) == doctest::Approx(std::exp(1.0) - 2));

  const auto p1 = RateFamily::poly(1.0);
  for (double t : {-2.0, 0.3, 1.7}) CHECK(chi(p1, t) == doctest::Approx(2 * (std::exp(t / 4) - 1)));

  CHECK(std::isinf(rate_function(ge, -0.1)));
  CHECK(rate_function(ge, 0.0) == 1.0);
  CHECK(rate_function(p1, 0.0) == doctest::Approx(2.0));

  for (const auto& f : {ge, RateFamily::ge(2.5), p1, RateFamily::poly(0.5)}) {
    for (double t = -3.0; t <= 3.0; t += 0.05) {
      const double x = chi_prime(f, t);
      REQUIRE(std::abs(rate_function(f, x) - (t * x - chi(f, t))) < 1e-8);
    }
    for (double x = 0.05; x < 4.0; x += 0.05) {
      const double lo = rate_function(f, x - 0.04), hi = rate_function(f, x + 0.04);
      REQUIRE(rate_function(f, x) <= 0.5 * (lo + hi) + 1e-8);
    }
    // chi' series and closed form agree where they meet.
    CHECK(std::abs(chi_prime(f, 0.4999999) - chi_prime(f, 0.5000001)) < 1e-6);
  }
}

TEST_CASE("precise deviations") {
  const double n = std::exp(27.0);  // log^{1/3} n = 3
  const auto v = precise_dev(RateFamily::ge(3.0), 1.0, n);
  CHECK(v.scale == doctest::Approx(3.0));
  CHECK(v.value == doctest::Approx(0.060714).epsilon(1e-5));
  CHECK(precise_dev(RateFamily::poly(1.0), 1.0, 1e4).scale == doctest::Approx(200.0));
  CHECK_THROWS_AS(precise_dev(RateFamily::ge(1.0), 0.0, 100.0), Error);

  // Decreasing in x up to the turning point of the exponent.
  const auto g = RateFamily::ge(1.0);
  const double s2 = precise_dev(g, 1.0, 1e6).scale;
  double prev = INFINITY;
  for (double x = 0.1; x < 6 * s2 / 1.0 * 0.99; x += 0.05) {
    const double cur = precise_dev(g, x, 1e6).value;
    REQUIRE(cur < prev);
    prev = cur;
  }
  const auto p = RateFamily::poly(0.5);
  const double lam = precise_dev(p, 1.0, 1e4).scale;
  prev = INFINITY;
  for (double x = 0.1; x < 2 * std::cbrt(lam) * 0.99; x += 0.05) {
    const double cur = precise_dev(p, x, 1e4).value;
    REQUIRE(cur < prev);
    prev = cur;
  }
  CHECK(precise_dev(g, 1.0, 1e8).value < precise_dev(g, 1.0, 1e4).value);
}

TEST_CASE("polynomial mgf constants") {
  for (double gamma : {0.3, 0.5, 1.0, 2.0}) {
    const auto g = gamma_tilde(0.0, gamma);
    CHECK(g.g2 == 1.0);
    for (double n : {10.0, 1e3, 1e6}) CHECK(mgf_asym_poly(0.0, n, gamma) == 1.0);
  }
  CHECK(gamma_tilde(0.0, 1.0).g1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_tilde(-0.6, 0.5), Error);

  const double gamma = 0.5, s = 0.2;
  const auto t = h_table(WeightModel::polynomial(gamma), 10000);
  double prev = INFINITY;
  for (std::size_t n : {1000u, 10000u}) {
    const double gap = log_mgf_logY_exact(t, n, s) - log_mgf_asym_poly(s, n, gamma);
    const double rel = std::abs(gap) / std::pow(n, 1 - 1 / (1 + gamma + s));
    CHECK(rel < prev);
    prev = rel;
  }
}

TEST_CASE("finite expansion of the truncated expected order") {
  const auto mt = build_mangoldt_table(1000);
  CHECK(expect_logO_trunc_expansion(WeightModel::uniform(), 8, mt) == 0.0);
  CHECK_THROWS_AS(expect_logO_trunc_expansion(WeightModel::polynomial(1.0), 100, mt), Error);
  const auto t = h_table(WeightModel::ewens(1.0), 2000);
  const double exact = expect_logO_exact(t, 2000, mt, truncation_b(2000));
  CHECK(std::abs(exact - expect_logO_trunc_expansion(WeightModel::ewens(1.0), 2000, mt)) <= 5.0);
}

TEST_CASE("zeta zero sums") {
  for (double X : {2.0, 10.0, 50.0}) {
    const auto zs = gamma_zero_sum(X, zeros());
    CHECK(std::abs(zs.imag_residue) < 1e-10);
    CHECK(std::abs(zs.value - gamma_zero_sum(X, zeros().first(50)).value) < 1e-9);
  }
  CHECK(gamma_zero_sum(10.0, zeros()).value == doctest::Approx(-3.78826584824336139e-11).epsilon(1e-6));
  CHECK_THROWS_AS(gamma_zero_sum(10.0, ZetaZeros::from({})), Error);

  // The derived correction reproduces sum_k Lambda(k)(e^{-X/k} - 1 + X/k).
  const auto mt = build_mangoldt_table(2'000'000);
  for (double X : {10.0, 30.0}) {
    double lhs = 0.0;
    for (std::size_t k = 2; k <= 2'000'000; ++k) {
      const double lam = mt.values()[k];
      if (lam > 0.0) lhs += lam * (std::expm1(-X / k) + X / k);
    }
    const double rhs = X * (std::log(X) - 1) - gamma_zero_sum(X, zeros()).value + std::log(2 * std::numbers::pi);
    CHECK(std::abs(lhs - rhs) < 0.05);
  }
}

TEST_CASE("expected order with zero sums") {
  const auto tr = expect_logO_expansion_zeros(2000, 1.0, zeros(), ExpansionKind::Truncated);
  CHECK(std::abs(tr.imag_residue) < 1e-10);
  const double lb = std::log(34.0);
  const double X = lb;
  CHECK(tr.X == doctest::Approx(X));
  CHECK(tr.value == doctest::Approx(0.5 * lb * lb - X * (std::log(X) - 1) + tr.zero_sum -
                                    std::log(2 * std::numbers::pi)));
  const auto lit = expect_logO_expansion_zeros(2000, 1.0, zeros(), ExpansionKind::Truncated,
                                               std::nullopt, Form::Literal);
  CHECK(lit.value == doctest::Approx(0.5 * lb * lb + X * (std::log(X) - 1) + tr.zero_sum));
  const auto full = expect_logO_expansion_zeros(500, 2.0, zeros(), ExpansionKind::Full);
  const double ey = expect_logY_exact(WeightModel::ewens(2.0), 500);
  const auto full2 = expect_logO_expansion_zeros(500, 2.0, zeros(), ExpansionKind::Full, ey);
  CHECK(full.value == full2.value);
  CHECK_THROWS_AS(expect_logO_expansion_zeros(8, 1.0, zeros(), ExpansionKind::Truncated), Error);
}

TEST_CASE("D_nk main terms") {
  const auto d = dnk_asym(100, 2, 1.0);
  CHECK(d.P_zero_main == doctest::Approx(0.0797885).epsilon(1e-6));
  CHECK(d.E_main == doctest::Approx(1.95601).epsilon(1e-5));
  CHECK(d.in_range);
  CHECK(dnk_asym(100, 100, 1.0).E_main == 0.0);
  CHECK(!dnk_asym(100, 50, 1.0).in_range);
  CHECK(!dnk_asym(100, 1, 1.0).in_range);
}

TEST_CASE("explicit formula for psi") {
  const auto mt = build_mangoldt_table(1'000'000);
  CHECK(std::abs(psi_explicit(100.0, zeros()).imag_residue) < 1e-10);
  CHECK(psi_explicit(100.0, zeros()).value == doctest::Approx(93.6700282592070176).epsilon(1e-12));
  CHECK(psi_explicit(1000.0, zeros()).value == doctest::Approx(993.973461987982123).epsilon(1e-12));
  const double big = psi_explicit(1e6, zeros()).value;
  CHECK(std::abs(big / chebyshev_psi(mt, 1'000'000) - 1) < 1e-3);
  CHECK_THROWS_AS(psi_explicit(1.5, zeros()), Error);
}
