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

#include "cyclemeter/permstat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "cyclemeter/error.hpp"
#include "text.hpp"

namespace cyclemeter {

CycleType::CycleType(std::size_t n, const std::map<std::uint32_t, std::uint32_t>& counts) : n_(n) {
  std::size_t total = 0;
  for (auto [m, c] : counts) {
    if (m == 0 || m > n) fail(ErrorKind::Validation, "cycle length out of 1..n");
    if (c == 0) continue;
    entries_.push_back({m, c});
    total += static_cast<std::size_t>(m) * c;
  }
  if (total != n)
    fail(ErrorKind::Validation, "cycle lengths sum to " + std::to_string(total) +
                                    ", expected " + std::to_string(n));
}

CycleType CycleType::from_lengths(std::size_t n, std::vector<std::uint32_t> lengths) {
  std::sort(lengths.begin(), lengths.end());
  CycleType ct;
  ct.n_ = n;
  std::size_t total = 0;
  for (std::uint32_t m : lengths) {
    if (m == 0 || m > n) fail(ErrorKind::Validation, "cycle length out of 1..n");
    total += m;
    if (!ct.entries_.empty() && ct.entries_.back().length == m)
      ++ct.entries_.back().count;
    else
      ct.entries_.push_back({m, 1});
  }
  if (total != n)
    fail(ErrorKind::Validation, "cycle lengths sum to " + std::to_string(total) +
                                    ", expected " + std::to_string(n));
  return ct;
}

std::uint32_t CycleType::count(std::uint32_t m) const {
  for (const auto& e : entries_)
    if (e.length == m) return e.count;
  return 0;
}

std::size_t CycleType::cycles() const {
  std::size_t c = 0;
  for (const auto& e : entries_) c += e.count;
  return c;
}

std::string CycleType::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(entries_[i].length) + ':' + std::to_string(entries_[i].count);
  }
  return s + '}';
}

std::vector<std::uint64_t> CycleType::key() const {
  std::vector<std::uint64_t> k{n_};
  for (const auto& e : entries_) k.push_back((std::uint64_t{e.length} << 32) | e.count);
  return k;
}

namespace {

std::size_t effective_b(std::size_t n, Truncation b) { return b ? std::min(*b, n) : n; }

struct PrimeExponents {
  std::uint32_t p;
  unsigned max_e;
  std::uint64_t sum_e;
};

// Per-prime max and total exponents over cycle lengths <= b.
void prime_exponents(const CycleType& ct, const MangoldtTable& table, std::size_t b,
                     std::vector<PrimeExponents>& out) {
  out.clear();
  if (ct.n() > table.limit())
    fail(ErrorKind::Range, "mangoldt table limit " + std::to_string(table.limit()) +
                               " below n = " + std::to_string(ct.n()));
  for (const auto& e : ct.entries()) {
    if (e.length > b) break;
    std::size_t m = e.length;
    while (m > 1) {
      const std::uint32_t p = table.smallest_prime_factor(m);
      unsigned j = 0;
      while (m % p == 0) {
        m /= p;
        ++j;
      }
      auto it = std::find_if(out.begin(), out.end(), [p](const auto& x) { return x.p == p; });
      if (it == out.end()) {
        out.push_back({p, j, std::uint64_t{j} * e.count});
      } else {
        it->max_e = std::max(it->max_e, j);
        it->sum_e += std::uint64_t{j} * e.count;
      }
    }
  }
}

}  // namespace

double log_Y(const CycleType& ct, Truncation b) {
  const std::size_t bb = effective_b(ct.n(), b);
  double s = 0.0;
  for (const auto& e : ct.entries()) {
    if (e.length > bb) break;
    s += e.count * std::log(static_cast<double>(e.length));
  }
  return s;
}

double log_O(const CycleType& ct, const MangoldtTable& table, Truncation b) {
  thread_local std::vector<PrimeExponents> pe;
  prime_exponents(ct, table, effective_b(ct.n(), b), pe);
  double s = 0.0;
  for (const auto& x : pe) s += x.max_e * table.values()[x.p];
  return s;
}

double log_Y_over_O(const CycleType& ct, const MangoldtTable& table, Truncation b) {
  thread_local std::vector<PrimeExponents> pe;
  prime_exponents(ct, table, effective_b(ct.n(), b), pe);
  double s = 0.0;
  for (const auto& x : pe)
    s += static_cast<double>(x.sum_e - x.max_e) * table.values()[x.p];
  return s;
}

DivisorCount d_nk(const CycleType& ct, std::size_t k, Truncation b) {
  if (k == 0) fail(ErrorKind::Domain, "k must be >= 1");
  const std::size_t bb = effective_b(ct.n(), b);
  std::size_t D = 0;
  for (const auto& e : ct.entries()) {
    if (e.length > bb) break;
    if (e.length % k == 0) D += e.count;
  }
  return {D, D > 0 ? 1 : 0};
}

OrderStats order_stats(const CycleType& ct, const MangoldtTable& table) {
  OrderStats s;
  s.b = truncation_b(ct.n());
  s.log_Y = log_Y(ct);
  s.log_O = log_O(ct, table);
  s.delta = log_Y_over_O(ct, table);
  s.log_Y_t = log_Y(ct, s.b);
  s.log_O_t = log_O(ct, table, s.b);
  s.delta_t = log_Y_over_O(ct, table, s.b);
  return s;
}

Functional Functional::parse(std::string_view s) {
  using K = Kind;
  if (s == "logY") return {K::LogY};
  if (s == "logO") return {K::LogO};
  if (s == "delta") return {K::Delta};
  if (s == "logY_t") return {K::LogYT};
  if (s == "logO_t") return {K::LogOT};
  if (s == "delta_t") return {K::DeltaT};
  for (auto [prefix, kind] : {std::pair{std::string_view("dnk:"), K::Dnk},
                              std::pair{std::string_view("dnkstar:"), K::DnkStar}}) {
    if (s.starts_with(prefix)) {
      const double k = text::parse_double(s.substr(prefix.size()), "k");
      if (!(k >= 1.0) || k != std::floor(k)) fail(ErrorKind::Parse, "k must be a positive integer");
      return {kind, static_cast<std::size_t>(k)};
    }
  }
  fail(ErrorKind::Parse, "unknown functional '" + std::string(s) +
                             "' (logY, logO, delta, logY_t, logO_t, delta_t, dnk:<k>, dnkstar:<k>)");
}

std::string Functional::name() const {
  switch (kind) {
    case Kind::LogY: return "logY";
    case Kind::LogO: return "logO";
    case Kind::Delta: return "delta";
    case Kind::LogYT: return "logY_t";
    case Kind::LogOT: return "logO_t";
    case Kind::DeltaT: return "delta_t";
    case Kind::Dnk: return "dnk:" + std::to_string(k);
    case Kind::DnkStar: return "dnkstar:" + std::to_string(k);
  }
  return "";
}

double evaluate(const Functional& f, const CycleType& ct, const MangoldtTable& table) {
  using K = Functional::Kind;
  switch (f.kind) {
    case K::LogY: return log_Y(ct);
    case K::LogO: return log_O(ct, table);
    case K::Delta: return log_Y_over_O(ct, table);
    case K::LogYT: return log_Y(ct, truncation_b(ct.n()));
    case K::LogOT: return log_O(ct, table, truncation_b(ct.n()));
    case K::DeltaT: return log_Y_over_O(ct, table, truncation_b(ct.n()));
    case K::Dnk: return static_cast<double>(d_nk(ct, f.k).D);
    case K::DnkStar: return d_nk(ct, f.k).D_star;
  }
  return 0.0;
}

namespace {

struct Enumerator {
  std::size_t n;
  const LogWeightTable& h;
  const std::function<void(const CycleType&, double)>& visit;
  std::map<std::uint32_t, std::uint32_t> counts;
  std::vector<double> log_mass;  // log(theta_m / m)

  void run(std::size_t remaining, std::size_t max_part, double logp) {
    if (remaining == 0) {
      visit(CycleType(n, counts), std::exp(logp - h.log_h[n]));
      return;
    }
    for (std::size_t part = std::min(remaining, max_part); part >= 1; --part) {
      const double lm = log_mass[part];
      double lp = logp;
      for (std::uint32_t c = 1; c * part <= remaining; ++c) {
        // Accumulates c log(theta/m) - log c!
        lp += lm - std::log(static_cast<double>(c));
        counts[static_cast<std::uint32_t>(part)] = c;
        run(remaining - c * part, part - 1, lp);
      }
      counts.erase(static_cast<std::uint32_t>(part));
    }
  }
};

}  // namespace

void enumerate_cycle_types(std::size_t n, const LogWeightTable& h,
                           const std::function<void(const CycleType&, double)>& visit,
                           std::size_t ceiling) {
  if (n > ceiling)
    fail(ErrorKind::Capacity, "enumeration limited to n <= " + std::to_string(ceiling));
  if (n > h.limit()) fail(ErrorKind::Range, "h table too small for enumeration");
  if (n == 0) return;
  Enumerator e{n, h, visit, {}, std::vector<double>(n + 1, 0.0)};
  for (std::size_t m = 1; m <= n; ++m)
    e.log_mass[m] = h.log_theta[m - 1] - std::log(static_cast<double>(m));
  e.run(n, n, 0.0);
}

std::vector<std::pair<CycleType, double>> enumerate_cycle_types(std::size_t n,
                                                                const LogWeightTable& h,
                                                                std::size_t ceiling) {
  std::vector<std::pair<CycleType, double>> out;
  enumerate_cycle_types(
      n, h, [&](const CycleType& ct, double p) { out.emplace_back(ct, p); }, ceiling);
  return out;
}

std::vector<std::pair<double, double>> exact_distribution(const Functional& f, std::size_t n,
                                                          const LogWeightTable& h,
                                                          const MangoldtTable& table) {
  std::vector<std::pair<double, double>> raw;
  enumerate_cycle_types(n, h, [&](const CycleType& ct, double p) {
    raw.emplace_back(evaluate(f, ct, table), p);
  });
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& [v, p] : raw) {
    if (!out.empty() && std::abs(v - out.back().first) <= 1e-9)
      out.back().second += p;
    else
      out.emplace_back(v, p);
  }
  return out;
}

double distribution_mean(const std::vector<std::pair<double, double>>& dist) {
  double sum = 0.0, comp = 0.0;
  for (const auto& [v, p] : dist) {
    const double t = v * p;
    const double s = sum + t;
    comp += std::abs(sum) >= std::abs(t) ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

void write_distribution_csv(std::ostream& out, const std::vector<std::pair<double, double>>& dist,
                            const std::vector<std::string>& meta) {
  for (const auto& line : meta) out << "# " << line << '\n';
  out << "value,probability\n";
  char buf[96];
  for (const auto& [v, p] : dist) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v, p);
    out << buf;
  }
}

std::vector<std::pair<double, double>> read_distribution_csv(std::istream& in) {
  std::vector<std::pair<double, double>> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const std::string_view s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!header) {
      if (s != "value,probability") fail(ErrorKind::Parse, "expected header 'value,probability'");
      header = true;
      continue;
    }
    const auto cells = text::split(s, ',');
    if (cells.size() != 2) fail(ErrorKind::Parse, "expected two columns");
    out.emplace_back(text::parse_double(cells[0], "value"), text::parse_double(cells[1], "probability"));
  }
  return out;
}

}  // namespace cyclemeter
