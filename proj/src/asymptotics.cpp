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

#include "cyclemeter/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cyclemeter/error.hpp"
#include "cyclemeter/series.hpp"

namespace cyclemeter {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_n(double n, double min, const char* what) {
  if (!(n >= min)) fail(ErrorKind::Domain, std::string(what) + " needs n >= " + std::to_string(min));
}

// sum_{k>=1} k t^{k-1} / (k+1)!, the derivative of excess_exp_ratio.
double excess_exp_ratio_prime(double t) {
  if (std::abs(t) < 0.5) {
    double term = 1.0, sum = 0.0;  // term = t^{k-1} / (k+1)!
    term = 0.5;
    for (int k = 1; k < 30; ++k) {
      sum += k * term;
      term *= t / (k + 2);
    }
    return sum;
  }
  return ((t - 1.0) * std::exp(t) + 1.0) / (t * t);
}

}  // namespace

double h_asym_ge(double r, double theta, double K, double n) {
  return (theta - 1.0) * std::log(n) + K - n * std::log(r) - std::lgamma(theta);
}

double h_asym_poly(double gamma, double n) {
  const double g1 = std::lgamma(1.0 + gamma);  // log Gamma(1+gamma)
  const double a = 1.0 + gamma;
  const double expo = std::exp(g1 / a) + std::exp(std::lgamma(gamma) - gamma / a * g1);
  return -0.5 * (kLog2Pi + std::lgamma(2.0 + gamma)) + (2.0 + gamma) / (2.0 * a) * (g1 - std::log(n)) +
         std::pow(n, gamma / a) * expo;
}

double erdos_turan_standardize(double L, double n, double theta) {
  require_n(n, 2.0, "erdos_turan_standardize");
  const double ln = std::log(n);
  return (L - 0.5 * theta * ln * ln) / std::sqrt(theta / 3.0 * ln * ln * ln);
}

double erdos_turan_standardize_poly(double L, double n, double gamma) {
  require_n(n, 2.0, "erdos_turan_standardize_poly");
  const double lambda = gamma_tilde(0.0, gamma).g1 * std::pow(n, gamma / (1.0 + gamma));
  const double a = (1.0 + gamma) * (1.0 + gamma);
  return (a * L / std::log(n) - lambda) / std::sqrt(lambda);
}

LltConstants llt_constants(double n, double theta) {
  require_n(n, 3.0, "llt_constants");
  const double ln = std::log(n);
  return {std::sqrt(theta / 3.0) * std::pow(ln, 1.0 / 6.0), 0.5 * theta * ln * ln,
          std::pow(ln, 4.0 / 3.0)};
}

double mod_gaussian_limit(double x, double theta) { return std::exp(x * x * x * theta / 18.0); }

std::complex<double> excess_exp_ratio(std::complex<double> s) {
  if (std::abs(s) < 0.5) {
    std::complex<double> term = s / 2.0, sum = 0.0;  // s^k / (k+1)!
    for (int k = 1; k < 30; ++k) {
      sum += term;
      term *= s / static_cast<double>(k + 2);
    }
    return sum;
  }
  return (std::exp(s) - 1.0 - s) / s;
}

std::complex<double> mgf_trunc_asym(std::complex<double> s, std::size_t n, double theta, Form form) {
  require_n(static_cast<double>(n), 3.0, "mgf_trunc_asym");
  const double c = form == Form::Derived ? theta : 1.0;
  const double lb = std::log(static_cast<double>(truncation_b(n)));
  return std::exp(c * lb * excess_exp_ratio(s));
}

namespace {

double poly_chi_constant(double gamma) {
  const double a = 1.0 + gamma;
  return a * std::exp(std::lgamma(gamma) - gamma / a * std::lgamma(a));
}

}  // namespace

double chi(const RateFamily& f, double t) {
  if (f.kind == RateFamily::Kind::GeneralizedEwens) {
    const double c = f.form == Form::Derived ? f.param : 1.0;
    return c * excess_exp_ratio(t).real();
  }
  const double a = (1.0 + f.param) * (1.0 + f.param);
  return poly_chi_constant(f.param) * std::expm1(t / a);
}

double chi_prime(const RateFamily& f, double t) {
  if (f.kind == RateFamily::Kind::GeneralizedEwens) {
    const double c = f.form == Form::Derived ? f.param : 1.0;
    return c * excess_exp_ratio_prime(t);
  }
  const double a = (1.0 + f.param) * (1.0 + f.param);
  return poly_chi_constant(f.param) / a * std::exp(t / a);
}

double rate_function(const RateFamily& f, double x) {
  if (std::isnan(x) || x < 0.0) return kInf;
  if (x == 0.0) {
    // sup_t(-chi(t)) is the t -> -inf limit.
    if (f.kind == RateFamily::Kind::GeneralizedEwens)
      return f.form == Form::Derived ? f.param : 1.0;
    return poly_chi_constant(f.param);
  }
  if (std::isinf(x)) return kInf;
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 2000 && chi_prime(f, lo) > x; ++i) lo *= 2.0;
  for (int i = 0; i < 2000 && chi_prime(f, hi) < x; ++i) hi *= 2.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (chi_prime(f, mid) < x)
      lo = mid;
    else
      hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  return t * x - chi(f, t);
}

PreciseDeviation precise_dev(const RateFamily& f, double x, double n) {
  if (!(x > 0.0)) fail(ErrorKind::Domain, "precise_dev needs x > 0");
  require_n(n, 3.0, "precise_dev");
  if (f.kind == RateFamily::Kind::GeneralizedEwens) {
    const double theta = f.param;
    const double s2 = theta / 3.0 * std::cbrt(std::log(n));
    const double v = std::exp(-s2 * x * x / 2.0 + x * x * x * theta / 18.0) /
                     std::sqrt(2.0 * std::numbers::pi * s2 * x * x);
    return {v, s2};
  }
  const double lambda = gamma_tilde(0.0, f.param).g1 * std::pow(n, f.param / (1.0 + f.param));
  const double v = std::exp(-std::cbrt(lambda) * x * x / 2.0 + x * x * x / 6.0) /
                   (x * std::pow(lambda, 1.0 / 6.0) * std::sqrt(2.0 * std::numbers::pi));
  return {v, lambda};
}

GammaTilde gamma_tilde(double s, double gamma) {
  if (!(gamma + s > 0.0)) fail(ErrorKind::Domain, "gamma_tilde needs gamma + s > 0");
  const double a = 1.0 + gamma;
  const double as = 1.0 + gamma + s;
  const double g1 = std::exp(std::log(as) + std::lgamma(gamma + s) - (1.0 - 1.0 / as) * std::lgamma(as));
  // Grouped so that s = 0 cancels exactly.
  const double log_g2 = (std::log(a) + std::lgamma(as) / as) - (std::log(as) + std::lgamma(a) / a);
  return {g1, std::exp(log_g2), log_g2};
}

double log_mgf_asym_poly(double s, double n, double gamma) {
  const GammaTilde gs = gamma_tilde(s, gamma);
  const GammaTilde g0 = gamma_tilde(0.0, gamma);
  const double a = 1.0 + gamma;
  const double as = 1.0 + gamma + s;
  return 0.5 * gs.log_g2 + 0.5 * (1.0 / a - 1.0 / as) * std::log(n) +
         (gs.g1 * std::pow(n, 1.0 - 1.0 / as) - g0.g1 * std::pow(n, 1.0 - 1.0 / a));
}

double mgf_asym_poly(double s, double n, double gamma) {
  return std::exp(log_mgf_asym_poly(s, n, gamma));
}

double expect_logO_trunc_expansion(const WeightModel& model, std::size_t n,
                                   const MangoldtTable& table) {
  const SingularityParams sp = singularity_params(model);
  require_n(static_cast<double>(n), 3.0, "expect_logO_trunc_expansion");
  const std::size_t b = truncation_b(n);
  const double ln = std::log(static_cast<double>(n));
  const auto kmax = static_cast<std::size_t>(std::floor(ln * ln));
  if (kmax > table.limit()) fail(ErrorKind::Range, "mangoldt table smaller than log^2 n");
  const double log_r = std::log(sp.r);

  // theta_m r^m / m for m <= b
  std::vector<double> mass(b + 1, 0.0);
  for (std::size_t m = 1; m <= b; ++m) {
    const double lt = model.log_theta(m);
    mass[m] = std::isinf(lt) ? 0.0 : std::exp(lt + static_cast<double>(m) * log_r) / static_cast<double>(m);
  }
  double first = 0.0;
  for (std::size_t m = 2; m <= b; ++m) first += std::log(static_cast<double>(m)) * mass[m];
  double second = 0.0, third = 0.0;
  for (std::size_t k = 2; k <= kmax; ++k) {
    const double lam = table.values()[k];
    if (lam == 0.0) continue;
    double A = 0.0;
    for (std::size_t m = k; m <= b; m += k) A += mass[m];
    second += lam * std::exp(-A);
    third += lam * (A - 1.0);
  }
  return first - second - third;
}

ZeroSum gamma_zero_sum(double X, const ZetaZeros& zeros) {
  if (zeros.count() == 0) fail(ErrorKind::Data, "zeta zeros table is empty");
  if (!(X > 0.0)) fail(ErrorKind::Domain, "zero sum needs X > 0");
  const double lx = std::log(X);
  std::complex<double> sum = 0.0;
  for (double t : zeros.imag_parts()) {
    const std::complex<double> rho(0.5, t), rho_bar(0.5, -t);
    sum += std::exp(complex_log_gamma(-rho) + rho * lx);
    sum += std::exp(complex_log_gamma(-rho_bar) + rho_bar * lx);
  }
  return {sum.real(), sum.imag()};
}

ZeroExpansion expect_logO_expansion_zeros(std::size_t n, double theta, const ZetaZeros& zeros,
                                          ExpansionKind which, std::optional<double> e_logY,
                                          Form form) {
  require_n(static_cast<double>(n), 3.0, "expect_logO_expansion_zeros");
  if (!(theta > 0.0)) fail(ErrorKind::Domain, "theta must be positive");
  if (zeros.count() == 0) fail(ErrorKind::Data, "zeta zeros table is empty");
  double lead, X;
  if (which == ExpansionKind::Truncated) {
    const std::size_t b = truncation_b(n);
    if (b < 2) fail(ErrorKind::Domain, "b_n < 2 makes theta log b_n vanish");
    const double lb = std::log(static_cast<double>(b));
    lead = 0.5 * theta * lb * lb;
    X = theta * lb;
  } else {
    lead = e_logY ? *e_logY : expect_logY_exact(WeightModel::ewens(theta), n);
    X = theta * std::log(static_cast<double>(n));
  }
  const ZeroSum zs = gamma_zero_sum(X, zeros);
  const double corr = X * (std::log(X) - 1.0);
  const double value = form == Form::Derived ? lead - corr + zs.value - kLog2Pi
                                             : lead + corr + zs.value;
  return {value, zs.value, zs.imag_residue, X};
}

DnkAsym dnk_asym(double n, double k, double theta) {
  if (!(k >= 1.0) || !(n >= 1.0)) fail(ErrorKind::Domain, "dnk_asym needs n, k >= 1");
  const double L = std::log(n / k);
  const double E = theta / k * L;
  double P0 = 0.0;  // 1/Gamma(0) = 0 at k = 1
  if (k > 1.0) P0 = std::exp(-theta / k * L + std::lgamma(theta) - std::lgamma(theta * (1.0 - 1.0 / k)));
  const bool in_range = k >= 2.0 && k <= std::pow(n, theta / (1.0 + theta));
  return {E, P0, in_range};
}

ExplicitPsi psi_explicit(double x, const ZetaZeros& zeros) {
  if (!(x >= 2.0)) fail(ErrorKind::Domain, "psi_explicit needs x >= 2");
  if (zeros.count() == 0) fail(ErrorKind::Data, "zeta zeros table is empty");
  const double lx = std::log(x);
  std::complex<double> sum = 0.0;
  for (double t : zeros.imag_parts()) {
    const std::complex<double> rho(0.5, t), rho_bar(0.5, -t);
    sum += std::exp(rho * lx) / rho;
    sum += std::exp(rho_bar * lx) / rho_bar;
  }
  const double v = x - sum.real() - kLog2Pi - 0.5 * std::log1p(-1.0 / (x * x));
  return {v, sum.imag()};
}

}  // namespace cyclemeter
