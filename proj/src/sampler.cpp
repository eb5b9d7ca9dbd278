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

#include "cyclemeter/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "cyclemeter/error.hpp"
#include "cyclemeter/kernels.hpp"
#include "text.hpp"

namespace cyclemeter {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(mix64(mix64(seed) ^ (index * 0xD1B54A32D192ED03ULL + 0x9E3779B97F4A7C15ULL)));
}

std::uint64_t Rng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

std::vector<double> first_cycle_length_pmf(const LogWeightTable& h, std::size_t n) {
  if (n == 0 || n > h.limit())
    fail(ErrorKind::Range, "pmf size " + std::to_string(n) + " outside h table 1.." +
                               std::to_string(h.limit()));
  std::vector<double> p(n);
  const double shift = std::log(static_cast<double>(n)) + h.log_h[n];
  kernels::exp_shifted_rev(h.log_theta.data(), h.log_h.data(), n, shift, p.data());
  const double total = pairwise_sum(p.data(), n);
  if (std::abs(total - 1.0) > 1e-9)
    std::cerr << "warning: first-cycle pmf at n = " << n << " renormalized by " << total << '\n';
  for (double& v : p) v /= total;
  return p;
}

CycleTypeSampler::CycleTypeSampler(const LogWeightTable& h, std::size_t n)
    : h_(h), n_(n), totals_(n + 1, 0.0), last_(n + 1, 0) {
  if (n > h.limit())
    fail(ErrorKind::Range, "sampler size " + std::to_string(n) + " beyond h table");
  std::vector<double> row(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double shift = std::log(static_cast<double>(k)) + h.log_h[k];
    kernels::exp_shifted_rev(h.log_theta.data(), h.log_h.data(), k, shift, row.data());
    // Same left-to-right order as the scan in cdf_search_rev.
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) total += row[i];
    totals_[k] = total;
    std::size_t last = k - 1;
    while (last > 0 && row[last] == 0.0) --last;
    last_[k] = last;
    drift_ = std::max(drift_, std::abs(total - 1.0));
  }
  if (drift_ > 1e-9)
    std::cerr << "warning: first-cycle pmf mass drifts from 1 by " << drift_ << '\n';
}

CycleType CycleTypeSampler::sample(Rng& rng) const {
  std::vector<std::uint32_t> lengths;
  std::size_t k = n_;
  while (k > 0) {
    const double shift = std::log(static_cast<double>(k)) + h_.log_h[k];
    const double target = rng.uniform() * totals_[k];
    std::size_t idx = kernels::cdf_search_rev(h_.log_theta.data(), h_.log_h.data(), k, shift,
                                              target, nullptr);
    if (idx >= k) idx = last_[k];
    const std::size_t m = idx + 1;
    lengths.push_back(static_cast<std::uint32_t>(m));
    k -= m;
  }
  return CycleType::from_lengths(n_, std::move(lengths));
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

SampleStats summarize(const std::vector<double>& values, std::size_t bins, bool keep_raw) {
  SampleStats s;
  s.count = values.size();
  if (values.empty()) return s;
  const std::size_t n = values.size();
  s.mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (values[i] - s.mean) * (values[i] - s.mean);
  s.variance = n > 1 ? pairwise_sum(dev.data(), n) / static_cast<double>(n - 1) : 0.0;
  s.se = std::sqrt(s.variance / static_cast<double>(n));
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;

  bins = std::max<std::size_t>(bins, 1);
  if (s.min == s.max) bins = 1;
  s.histogram.edges.resize(bins + 1);
  s.histogram.counts.assign(bins, 0);
  const double width = (s.max - s.min) / static_cast<double>(bins);
  for (std::size_t j = 0; j <= bins; ++j)
    s.histogram.edges[j] = j == bins ? s.max : s.min + width * static_cast<double>(j);
  for (double v : values) {
    std::size_t j = width > 0.0 ? static_cast<std::size_t>((v - s.min) / width) : 0;
    if (j >= bins) j = bins - 1;
    ++s.histogram.counts[j];
  }
  if (keep_raw) s.raw = values;
  return s;
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<double> sample_values(const LogWeightTable& h, std::size_t n, std::uint64_t samples,
                                  std::uint64_t seed, unsigned workers,
                                  const std::function<double(const CycleType&)>& fn) {
  if (samples == 0) fail(ErrorKind::Validation, "samples must be >= 1");
  const CycleTypeSampler sampler(h, n);
  std::vector<double> values(samples);
  workers = std::max(1u, workers);
  auto run = [&](unsigned w) {
    for (std::uint64_t i = w; i < samples; i += workers) {
      Rng rng = Rng::stream(seed, i);
      values[i] = fn(sampler.sample(rng));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  return values;
}

SampleStats monte_carlo(const Functional& f, const LogWeightTable& h, std::size_t n,
                        std::uint64_t samples, std::uint64_t seed, unsigned workers,
                        const MangoldtTable& table, std::size_t bins, bool keep_raw) {
  const auto values = sample_values(h, n, samples, seed, workers,
                                    [&](const CycleType& ct) { return evaluate(f, ct, table); });
  return summarize(values, bins, keep_raw);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) fail(ErrorKind::Validation, "ks_distance needs data");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double F = cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - F, F - static_cast<double>(i) / n});
  }
  return d;
}

std::string stats_json(const SampleStats& s,
                       const std::vector<std::pair<std::string, std::string>>& meta) {
  nlohmann::ordered_json j;
  if (!meta.empty()) {
    nlohmann::ordered_json m;
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = m;
  }
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["se"] = s.se;
  j["min"] = s.min;
  j["max"] = s.max;
  j["histogram"] = {{"edges", s.histogram.edges}, {"counts", s.histogram.counts}};
  return j.dump(2);
}

void write_raw_csv(std::ostream& out, const std::vector<double>& values,
                   const std::vector<std::string>& meta) {
  for (const auto& line : meta) out << "# " << line << '\n';
  out << "index,value\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    out << i << ',' << buf << '\n';
  }
}

std::vector<double> read_raw_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    const std::string_view s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!header) {
      if (s != "index,value") fail(ErrorKind::Parse, "expected header 'index,value'");
      header = true;
      continue;
    }
    const auto cells = text::split(s, ',');
    if (cells.size() != 2) fail(ErrorKind::Parse, "expected two columns");
    out.push_back(text::parse_double(cells[1], "value"));
  }
  return out;
}

}  // namespace cyclemeter
