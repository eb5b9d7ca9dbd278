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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cyclemeter/numtheory.hpp"
#include "cyclemeter/permstat.hpp"
#include "cyclemeter/series.hpp"

namespace cyclemeter {

// SplitMix64. Stream i is a pure function of (seed, i).
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  // Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// P(L = m) = theta_m h_{n-m} / (n h_n) for m = 1..n, renormalized.
std::vector<double> first_cycle_length_pmf(const LogWeightTable& h, std::size_t n);

class CycleTypeSampler {
 public:
  CycleTypeSampler(const LogWeightTable& h, std::size_t n);

  CycleType sample(Rng& rng) const;
  std::size_t n() const { return n_; }
  // Largest |sum_m P(L=m) - 1| over sizes 1..n; above 1e-9 a warning is logged.
  double max_normalization_drift() const { return drift_; }

 private:
  const LogWeightTable& h_;
  std::size_t n_;
  std::vector<double> totals_;  // per-size pmf mass, summed in scan order
  std::vector<std::size_t> last_;  // last index with positive mass per size
  double drift_ = 0.0;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
};

struct SampleStats {
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double se = 0.0;
  double min = 0.0;
  double max = 0.0;
  Histogram histogram;
  std::vector<double> raw;  // filled when requested
};

// Pairwise sum; the split points depend only on the length.
double pairwise_sum(const double* x, std::size_t n);

SampleStats summarize(const std::vector<double>& values, std::size_t bins = 20,
                      bool keep_raw = false);

// values[i] = fn(sample drawn from stream i), computed on `workers` threads.
// The output does not depend on the worker count.
std::vector<double> sample_values(const LogWeightTable& h, std::size_t n, std::uint64_t samples,
                                  std::uint64_t seed, unsigned workers,
                                  const std::function<double(const CycleType&)>& fn);

SampleStats monte_carlo(const Functional& f, const LogWeightTable& h, std::size_t n,
                        std::uint64_t samples, std::uint64_t seed, unsigned workers,
                        const MangoldtTable& table, std::size_t bins = 20, bool keep_raw = false);

unsigned default_workers();

// Kolmogorov-Smirnov distance of the sample to a continuous cdf.
double ks_distance(std::vector<double> values, const std::function<double(double)>& cdf);
double standard_normal_cdf(double x);

std::string stats_json(const SampleStats& stats,
                       const std::vector<std::pair<std::string, std::string>>& meta = {});
void write_raw_csv(std::ostream& out, const std::vector<double>& values,
                   const std::vector<std::string>& meta = {});
std::vector<double> read_raw_csv(std::istream& in);

}  // namespace cyclemeter
