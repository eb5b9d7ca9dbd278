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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cyclemeter/numtheory.hpp"
#include "cyclemeter/weights.hpp"

namespace cyclemeter {

// Power series truncated at `order`. Log representation stores log|c_k| and
// only admits nonnegative coefficients (zero is -inf).
struct TruncatedSeries {
  enum class Rep { Real, Complex, Log };

  Rep rep = Rep::Real;
  std::vector<double> re;  // real part, or log-magnitude for Rep::Log
  std::vector<double> im;  // Rep::Complex only

  static TruncatedSeries real(std::vector<double> c);
  static TruncatedSeries complex(const std::vector<std::complex<double>>& c);
  static TruncatedSeries log_domain(std::vector<double> log_c);

  std::size_t order() const { return re.empty() ? 0 : re.size() - 1; }
  std::complex<double> coeff(std::size_t k) const;
};

// exp(g) truncated at N, via n F_n = sum_k k G_k F_{n-k}. `as` converts a
// real input to another representation first (Log rejects negative input).
TruncatedSeries series_exp(const TruncatedSeries& g, std::size_t N,
                           std::optional<TruncatedSeries::Rep> as = std::nullopt);

inline constexpr std::size_t kHTableCeiling = 50'000;

// h_0..h_N in log domain for a real, nonnegative weight model.
struct LogWeightTable {
  WeightModel model;
  std::vector<double> log_theta;  // log_theta[m-1] = log theta_m
  std::vector<double> log_h;      // log_h[0] = 0

  std::size_t limit() const { return log_h.size() - 1; }
  double h(std::size_t n) const;
  // theta_m h_{n-m} / (n h_n)
  double first_cycle_prob(std::size_t n, std::size_t m) const;
  // E[C_m] = theta_m h_{n-m} / (m h_n)
  double expected_count(std::size_t n, std::size_t m) const;
};

LogWeightTable h_table(const WeightModel& model, std::size_t N,
                       std::size_t ceiling = kHTableCeiling);

// clamp(floor(n / ln^2 n), 1, n)
std::size_t truncation_b(std::size_t n);

using Truncation = std::optional<std::size_t>;  // nullopt means b = n

// E[prod_m w_m^{C_m}] for nonnegative multipliers given as log w_m
// (index m-1, -inf allowed). Returned as a logarithm.
double log_weighted_expectation(const LogWeightTable& h, std::size_t n,
                                const std::vector<double>& log_w);
// Same for complex multipliers via the probability-scaled recursion.
std::complex<double> weighted_expectation(const LogWeightTable& h, std::size_t n,
                                          const std::vector<std::complex<double>>& w);

// E[exp(s log Y_n)], or of the truncated log Y when b is given.
std::complex<double> mgf_logY_exact(const LogWeightTable& h, std::size_t n,
                                    std::complex<double> s, Truncation b = std::nullopt);
std::complex<double> mgf_logY_exact(const WeightModel& model, std::size_t n,
                                    std::complex<double> s, Truncation b = std::nullopt);
// log E[exp(s log Y_n)] for real s, with no intermediate overflow.
double log_mgf_logY_exact(const LogWeightTable& h, std::size_t n, double s,
                          Truncation b = std::nullopt);

double expect_logY_exact(const LogWeightTable& h, std::size_t n, Truncation b = std::nullopt);
double expect_logY_exact(const WeightModel& model, std::size_t n, Truncation b = std::nullopt);

std::complex<double> dnk_pgf_exact(const LogWeightTable& h, std::size_t n, std::size_t k,
                                   std::complex<double> u, Truncation b = std::nullopt);
double expect_dnk_exact(const LogWeightTable& h, std::size_t n, std::size_t k,
                        Truncation b = std::nullopt);
double p_dnk_zero(const LogWeightTable& h, std::size_t n, std::size_t k,
                  Truncation b = std::nullopt);

inline constexpr double kLogOCostCeiling = 5e9;

// Work estimate (exp evaluations) for expect_logO_exact.
double expect_logO_cost(std::size_t n, Truncation b, const MangoldtTable& mangoldt);
double expect_logO_exact(const LogWeightTable& h, std::size_t n, const MangoldtTable& mangoldt,
                         Truncation b = std::nullopt, double cost_ceiling = kLogOCostCeiling);

// `n,log_h` CSV; comment lines start with '#'.
void write_h_table_csv(std::ostream& out, const LogWeightTable& table,
                       const std::vector<std::string>& meta = {});
std::vector<double> read_h_table_csv(std::istream& in);

}  // namespace cyclemeter
