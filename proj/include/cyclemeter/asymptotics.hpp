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

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cyclemeter/numtheory.hpp"
#include "cyclemeter/weights.hpp"

namespace cyclemeter {

// Principal (analytically continued) log Gamma. Lanczos g = 7 for
// Re z >= 1/2, upward recurrence below. Poles raise ErrorKind::Domain.
std::complex<double> complex_log_gamma(std::complex<double> z);

// Imaginary parts t_j of the nontrivial zeros 1/2 + i t_j, ascending.
class ZetaZeros {
 public:
  static ZetaZeros from(std::vector<double> imag_parts);
  static ZetaZeros load(const std::string& path);
  // CYCLEMETER_ZEROS if set, else the table shipped in data/.
  static ZetaZeros bundled();
  static std::string bundled_path();

  std::size_t count() const { return t_.size(); }
  const std::vector<double>& imag_parts() const { return t_; }
  ZetaZeros first(std::size_t k) const;

 private:
  std::vector<double> t_;
};

// Which reading of a display to evaluate. Derived is the default; Literal
// reproduces the printed formula where the two differ.
enum class Form { Derived, Literal };

// log of n^{theta-1} e^K / (r^n Gamma(theta))
double h_asym_ge(double r, double theta, double K, double n);
// log of the saddle-point main term for theta_m = m^gamma.
double h_asym_poly(double gamma, double n);

// (L - (theta/2) log^2 n) / sqrt((theta/3) log^3 n)
double erdos_turan_standardize(double L, double n, double theta);
// Polynomial regime: ((1+gamma)^2 L / log n - lambda_n) / sqrt(lambda_n).
double erdos_turan_standardize_poly(double L, double n, double gamma);

struct LltConstants {
  double sigma;      // sqrt(theta/3) log^{1/6} n
  double centering;  // (theta/2) log^2 n
  double scale;      // log^{4/3} n
};
LltConstants llt_constants(double n, double theta);

double mod_gaussian_limit(double x, double theta);
// exp(c log b_n ((e^s - 1)/s - 1)) with c = theta (Derived) or 1 (Literal).
std::complex<double> mgf_trunc_asym(std::complex<double> s, std::size_t n, double theta,
                                    Form form = Form::Derived);

struct RateFamily {
  enum class Kind { GeneralizedEwens, Polynomial };
  Kind kind;
  double param;  // theta or gamma
  Form form = Form::Derived;

  static RateFamily ge(double theta, Form form = Form::Derived) {
    return {Kind::GeneralizedEwens, theta, form};
  }
  static RateFamily poly(double gamma) { return {Kind::Polynomial, gamma, Form::Derived}; }
};

// (e^s - 1 - s) / s, continuous at 0.
std::complex<double> excess_exp_ratio(std::complex<double> s);

double chi(const RateFamily& f, double t);
double chi_prime(const RateFamily& f, double t);
// sup_t (t x - chi(t)); +inf outside the closure of chi' range.
double rate_function(const RateFamily& f, double x);

struct PreciseDeviation {
  double value;
  double scale;  // sigma_n^2 (GE) or lambda_n (polynomial)
};
PreciseDeviation precise_dev(const RateFamily& f, double x, double n);

struct GammaTilde {
  double g1;
  double g2;
  double log_g2;
};
GammaTilde gamma_tilde(double s, double gamma);
double log_mgf_asym_poly(double s, double n, double gamma);
double mgf_asym_poly(double s, double n, double gamma);

// Finite three-sum expansion of E[log O~_n] for a class-F model.
double expect_logO_trunc_expansion(const WeightModel& model, std::size_t n,
                                   const MangoldtTable& table);

struct ZeroSum {
  double value;
  double imag_residue;
};
// sum over zeros of Gamma(-rho) X^rho with each rho paired with its conjugate.
ZeroSum gamma_zero_sum(double X, const ZetaZeros& zeros);

enum class ExpansionKind { Truncated, Full };

struct ZeroExpansion {
  double value;
  double zero_sum;
  double imag_residue;
  double X;
};
// Truncated: (theta/2) log^2 b_n with X = theta log b_n; Full: E[log Y_n]
// with X = theta log n. Derived form subtracts X(log X - 1) and log 2 pi.
ZeroExpansion expect_logO_expansion_zeros(std::size_t n, double theta, const ZetaZeros& zeros,
                                          ExpansionKind which,
                                          std::optional<double> e_logY = std::nullopt,
                                          Form form = Form::Derived);

struct DnkAsym {
  double E_main;
  double P_zero_main;
  bool in_range;  // 2 <= k <= n^{theta/(1+theta)}
};
DnkAsym dnk_asym(double n, double k, double theta);

struct ExplicitPsi {
  double value;
  double imag_residue;
};
ExplicitPsi psi_explicit(double x, const ZetaZeros& zeros);

}  // namespace cyclemeter
