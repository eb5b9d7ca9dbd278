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

#include "cyclemeter/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "cyclemeter/error.hpp"
#include "cyclemeter/kernels.hpp"
#include "text.hpp"

namespace cyclemeter {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log F for F = exp(G), given a[i] = log((i+1) G_{i+1}).
std::vector<double> log_exp_core(const double* a, std::size_t N) {
  std::vector<double> lf(N + 1);
  lf[0] = 0.0;
  for (std::size_t n = 1; n <= N; ++n)
    lf[n] = kernels::log_sum_exp_rev(a, lf.data(), n) - std::log(static_cast<double>(n));
  return lf;
}

std::size_t effective_b(std::size_t n, Truncation b) { return b ? std::min(*b, n) : n; }

void check_n(const LogWeightTable& h, std::size_t n) {
  if (n > h.limit())
    fail(ErrorKind::Range, "n = " + std::to_string(n) + " beyond h table limit " +
                               std::to_string(h.limit()));
}

}  // namespace

TruncatedSeries TruncatedSeries::real(std::vector<double> c) {
  TruncatedSeries s;
  s.rep = Rep::Real;
  s.re = std::move(c);
  return s;
}

TruncatedSeries TruncatedSeries::complex(const std::vector<std::complex<double>>& c) {
  TruncatedSeries s;
  s.rep = Rep::Complex;
  s.re.reserve(c.size());
  s.im.reserve(c.size());
  for (const auto& z : c) {
    s.re.push_back(z.real());
    s.im.push_back(z.imag());
  }
  return s;
}

TruncatedSeries TruncatedSeries::log_domain(std::vector<double> log_c) {
  TruncatedSeries s;
  s.rep = Rep::Log;
  s.re = std::move(log_c);
  return s;
}

std::complex<double> TruncatedSeries::coeff(std::size_t k) const {
  if (k >= re.size()) return 0.0;
  switch (rep) {
    case Rep::Real: return re[k];
    case Rep::Complex: return {re[k], im[k]};
    case Rep::Log: return std::exp(re[k]);
  }
  return 0.0;
}

TruncatedSeries series_exp(const TruncatedSeries& g_in, std::size_t N,
                           std::optional<TruncatedSeries::Rep> as) {
  using Rep = TruncatedSeries::Rep;
  TruncatedSeries g = g_in;
  if (as && *as != g.rep) {
    if (*as == Rep::Log) {
      if (g.rep != Rep::Real)
        fail(ErrorKind::Representation, "only real series convert to log domain");
      for (double& c : g.re) {
        if (c < 0.0) fail(ErrorKind::Representation, "log-domain series needs nonnegative coefficients");
        c = c > 0.0 ? std::log(c) : kNegInf;
      }
    } else if (*as == Rep::Complex && g.rep == Rep::Real) {
      g.im.assign(g.re.size(), 0.0);
    } else {
      fail(ErrorKind::Representation, "unsupported series conversion");
    }
    g.rep = *as;
  }
  const double g0 = g.rep == Rep::Log ? (g.re.empty() ? kNegInf : std::exp(g.re[0]))
                                      : (g.re.empty() ? 0.0 : g.re[0]);
  if (g0 != 0.0 || (g.rep == Rep::Complex && !g.im.empty() && g.im[0] != 0.0))
    fail(ErrorKind::Domain, "series_exp needs a zero constant term");

  auto coef = [&](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? v[k] : (g.rep == Rep::Log ? kNegInf : 0.0);
  };

  if (g.rep == Rep::Log) {
    std::vector<double> a(N);
    for (std::size_t i = 0; i < N; ++i) {
      const double lg = coef(g.re, i + 1);
      a[i] = lg == kNegInf ? kNegInf : std::log(static_cast<double>(i + 1)) + lg;
    }
    return TruncatedSeries::log_domain(log_exp_core(a.data(), N));
  }

  std::vector<double> ar(N), ai(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double k = static_cast<double>(i + 1);
    ar[i] = k * coef(g.re, i + 1);
    ai[i] = g.rep == Rep::Complex ? k * coef(g.im, i + 1) : 0.0;
  }
  std::vector<double> fr(N + 1, 0.0), fi(N + 1, 0.0);
  fr[0] = 1.0;
  for (std::size_t n = 1; n <= N; ++n) {
    const double inv = 1.0 / static_cast<double>(n);
    if (g.rep == Rep::Real) {
      fr[n] = kernels::dot_rev(ar.data(), fr.data(), n) * inv;
    } else {
      fr[n] = (kernels::dot_rev(ar.data(), fr.data(), n) -
               kernels::dot_rev(ai.data(), fi.data(), n)) * inv;
      fi[n] = (kernels::dot_rev(ar.data(), fi.data(), n) +
               kernels::dot_rev(ai.data(), fr.data(), n)) * inv;
    }
  }
  if (g.rep == Rep::Real) return TruncatedSeries::real(std::move(fr));
  TruncatedSeries out;
  out.rep = Rep::Complex;
  out.re = std::move(fr);
  out.im = std::move(fi);
  return out;
}

double LogWeightTable::h(std::size_t n) const { return std::exp(log_h.at(n)); }

double LogWeightTable::first_cycle_prob(std::size_t n, std::size_t m) const {
  return std::exp(log_theta[m - 1] + log_h[n - m] - std::log(static_cast<double>(n)) - log_h[n]);
}

double LogWeightTable::expected_count(std::size_t n, std::size_t m) const {
  return std::exp(log_theta[m - 1] + log_h[n - m] - std::log(static_cast<double>(m)) - log_h[n]);
}

LogWeightTable h_table(const WeightModel& model, std::size_t N, std::size_t ceiling) {
  if (!model.is_real())
    fail(ErrorKind::Representation, "h_table needs a real weight model");
  if (N > ceiling)
    fail(ErrorKind::Capacity, "h table size " + std::to_string(N) + " exceeds ceiling " +
                                  std::to_string(ceiling) +
                                  "; use the closed form h_n = Gamma(n+theta)/(Gamma(theta) n!) "
                                  "for Ewens weights or raise the ceiling");
  LogWeightTable t{model, {}, {}};
  t.log_theta.resize(N);
  for (std::size_t m = 1; m <= N; ++m) {
    const double th = model.theta(m);
    if (!(th >= 0.0)) fail(ErrorKind::Validation, "negative weight at m = " + std::to_string(m));
    t.log_theta[m - 1] = model.log_theta(m);
  }
  t.log_h = log_exp_core(t.log_theta.data(), N);
  return t;
}

std::size_t truncation_b(std::size_t n) {
  if (n <= 1) return n;
  const double ln = std::log(static_cast<double>(n));
  const double v = std::floor(static_cast<double>(n) / (ln * ln));
  if (v < 1.0) return 1;
  if (v >= static_cast<double>(n)) return n;
  return static_cast<std::size_t>(v);
}

double log_weighted_expectation(const LogWeightTable& h, std::size_t n,
                                const std::vector<double>& log_w) {
  check_n(h, n);
  if (n == 0) return 0.0;
  if (log_w.size() < n) fail(ErrorKind::Validation, "multiplier array shorter than n");
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lt = h.log_theta[i];
    a[i] = (lt == kNegInf || log_w[i] == kNegInf) ? kNegInf : lt + log_w[i];
  }
  const std::vector<double> lf = log_exp_core(a.data(), n);
  return lf[n] - h.log_h[n];
}

std::complex<double> weighted_expectation(const LogWeightTable& h, std::size_t n,
                                          const std::vector<std::complex<double>>& w) {
  check_n(h, n);
  if (n == 0) return 1.0;
  if (w.size() < n) fail(ErrorKind::Validation, "multiplier array shorter than n");
  std::vector<double> p(n), qr(n), qi(n), fr(n + 1), fi(n + 1);
  fr[0] = 1.0;
  fi[0] = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double shift = std::log(static_cast<double>(k)) + h.log_h[k];
    // p[i] = P(first cycle has length i+1 | size k)
    kernels::exp_shifted_rev(h.log_theta.data(), h.log_h.data(), k, shift, p.data());
    for (std::size_t i = 0; i < k; ++i) {
      qr[i] = p[i] * w[i].real();
      qi[i] = p[i] * w[i].imag();
    }
    fr[k] = kernels::dot_rev(qr.data(), fr.data(), k) - kernels::dot_rev(qi.data(), fi.data(), k);
    fi[k] = kernels::dot_rev(qr.data(), fi.data(), k) + kernels::dot_rev(qi.data(), fr.data(), k);
    if (!std::isfinite(fr[k]) || !std::isfinite(fi[k]))
      fail(ErrorKind::NumericRange, "complex recursion overflowed at size " + std::to_string(k));
  }
  return {fr[n], fi[n]};
}

double log_mgf_logY_exact(const LogWeightTable& h, std::size_t n, double s, Truncation b) {
  check_n(h, n);
  if (s == 0.0) return 0.0;
  const std::size_t bb = effective_b(n, b);
  std::vector<double> lw(n, 0.0);
  for (std::size_t m = 2; m <= bb; ++m) lw[m - 1] = s * std::log(static_cast<double>(m));
  return log_weighted_expectation(h, n, lw);
}

std::complex<double> mgf_logY_exact(const LogWeightTable& h, std::size_t n,
                                    std::complex<double> s, Truncation b) {
  check_n(h, n);
  if (s == std::complex<double>(0.0, 0.0)) return 1.0;
  if (s.imag() == 0.0) {
    const double v = std::exp(log_mgf_logY_exact(h, n, s.real(), b));
    if (!std::isfinite(v)) fail(ErrorKind::NumericRange, "mgf overflows double; use the log form");
    return v;
  }
  const std::size_t bb = effective_b(n, b);
  std::vector<std::complex<double>> w(n, 1.0);
  for (std::size_t m = 2; m <= bb; ++m) w[m - 1] = std::exp(s * std::log(static_cast<double>(m)));
  return weighted_expectation(h, n, w);
}

std::complex<double> mgf_logY_exact(const WeightModel& model, std::size_t n,
                                    std::complex<double> s, Truncation b) {
  return mgf_logY_exact(h_table(model, n), n, s, b);
}

double expect_logY_exact(const LogWeightTable& h, std::size_t n, Truncation b) {
  check_n(h, n);
  const std::size_t bb = effective_b(n, b);
  double sum = 0.0;
  for (std::size_t m = 2; m <= bb; ++m)
    sum += std::log(static_cast<double>(m)) * h.expected_count(n, m);
  return sum;
}

double expect_logY_exact(const WeightModel& model, std::size_t n, Truncation b) {
  return expect_logY_exact(h_table(model, n), n, b);
}

std::complex<double> dnk_pgf_exact(const LogWeightTable& h, std::size_t n, std::size_t k,
                                   std::complex<double> u, Truncation b) {
  check_n(h, n);
  if (k == 0) fail(ErrorKind::Domain, "k must be >= 1");
  const std::size_t bb = effective_b(n, b);
  if (k > bb || u == std::complex<double>(1.0, 0.0)) return 1.0;
  if (u.imag() == 0.0 && u.real() >= 0.0) {
    const double lu = u.real() > 0.0 ? std::log(u.real()) : kNegInf;
    std::vector<double> lw(n, 0.0);
    for (std::size_t m = k; m <= bb; m += k) lw[m - 1] = lu;
    return std::exp(log_weighted_expectation(h, n, lw));
  }
  std::vector<std::complex<double>> w(n, 1.0);
  for (std::size_t m = k; m <= bb; m += k) w[m - 1] = u;
  return weighted_expectation(h, n, w);
}

double expect_dnk_exact(const LogWeightTable& h, std::size_t n, std::size_t k, Truncation b) {
  check_n(h, n);
  if (k == 0) fail(ErrorKind::Domain, "k must be >= 1");
  const std::size_t bb = effective_b(n, b);
  double sum = 0.0;
  for (std::size_t m = k; m <= bb; m += k) sum += h.expected_count(n, m);
  return sum;
}

double p_dnk_zero(const LogWeightTable& h, std::size_t n, std::size_t k, Truncation b) {
  check_n(h, n);
  if (k == 0) fail(ErrorKind::Domain, "k must be >= 1");
  const std::size_t bb = effective_b(n, b);
  if (k > bb) return 1.0;
  // With 2k > n at most one cycle can have length k, so D is 0 or 1.
  if (2 * k > n) return 1.0 - h.expected_count(n, k);
  std::vector<double> lw(n, 0.0);
  for (std::size_t m = k; m <= bb; m += k) lw[m - 1] = kNegInf;
  return std::exp(log_weighted_expectation(h, n, lw));
}

double expect_logO_cost(std::size_t n, Truncation b, const MangoldtTable& mangoldt) {
  const std::size_t bb = effective_b(n, b);
  if (bb > mangoldt.limit()) fail(ErrorKind::Range, "mangoldt table too small for b");
  double cost = 0.0;
  const double per = 0.5 * static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t k = 2; k <= bb && 2 * k <= n; ++k)
    if (mangoldt.values()[k] > 0.0) cost += per;
  return cost;
}

double expect_logO_exact(const LogWeightTable& h, std::size_t n, const MangoldtTable& mangoldt,
                         Truncation b, double cost_ceiling) {
  check_n(h, n);
  const double cost = expect_logO_cost(n, b, mangoldt);
  if (cost > cost_ceiling)
    fail(ErrorKind::Capacity, "expect_logO_exact needs ~" + text::num(cost) +
                                  " operations, above the ceiling " + text::num(cost_ceiling));
  const std::size_t bb = effective_b(n, b);
  double sum = 0.0;
  for (std::size_t k = 2; k <= bb; ++k) {
    const double lam = mangoldt.values()[k];
    if (lam > 0.0) sum += lam * (1.0 - p_dnk_zero(h, n, k, b));
  }
  return sum;
}

void write_h_table_csv(std::ostream& out, const LogWeightTable& table,
                       const std::vector<std::string>& meta) {
  for (const auto& line : meta) out << "# " << line << '\n';
  out << "n,log_h\n";
  char buf[64];
  for (std::size_t n = 0; n < table.log_h.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", table.log_h[n]);
    out << n << ',' << buf << '\n';
  }
}

std::vector<double> read_h_table_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const std::string_view s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!header) {
      if (s != "n,log_h") fail(ErrorKind::Parse, "expected header 'n,log_h'");
      header = true;
      continue;
    }
    const auto cells = text::split(s, ',');
    if (cells.size() != 2) fail(ErrorKind::Parse, "expected two columns in h table");
    if (text::parse_double(cells[0], "n") != static_cast<double>(out.size()))
      fail(ErrorKind::Parse, "h table rows out of order");
    out.push_back(text::parse_double(cells[1], "log_h"));
  }
  return out;
}

}  // namespace cyclemeter
