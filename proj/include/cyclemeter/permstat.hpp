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
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclemeter/numtheory.hpp"
#include "cyclemeter/series.hpp"

namespace cyclemeter {

// Cycle counts C_m of a permutation of n, stored sparsely by length.
class CycleType {
 public:
  struct Entry {
    std::uint32_t length;
    std::uint32_t count;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  CycleType() = default;
  // Throws ErrorKind::Validation unless sum m C_m = n and lengths lie in 1..n.
  CycleType(std::size_t n, const std::map<std::uint32_t, std::uint32_t>& counts);
  static CycleType from_lengths(std::size_t n, std::vector<std::uint32_t> lengths);

  std::size_t n() const { return n_; }
  // Increasing length, counts >= 1.
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint32_t count(std::uint32_t m) const;
  std::size_t cycles() const;
  std::string to_string() const;  // "{1:2,3:1}"

  friend bool operator==(const CycleType&, const CycleType&) = default;
  friend auto operator<=>(const CycleType& a, const CycleType& b) {
    return a.key() <=> b.key();
  }

 private:
  std::vector<std::uint64_t> key() const;

  std::size_t n_ = 0;
  std::vector<Entry> entries_;
};

struct OrderStats {
  double log_Y = 0.0;
  double log_O = 0.0;
  double delta = 0.0;
  double log_Y_t = 0.0;
  double log_O_t = 0.0;
  double delta_t = 0.0;
  std::size_t b = 0;
};

double log_Y(const CycleType& ct, Truncation b = std::nullopt);
double log_O(const CycleType& ct, const MangoldtTable& table, Truncation b = std::nullopt);
// Y/O computed from prime exponents, so it is exactly 0 when Y = O.
double log_Y_over_O(const CycleType& ct, const MangoldtTable& table, Truncation b = std::nullopt);

struct DivisorCount {
  std::size_t D;
  int D_star;
};
DivisorCount d_nk(const CycleType& ct, std::size_t k, Truncation b = std::nullopt);

OrderStats order_stats(const CycleType& ct, const MangoldtTable& table);

// A class function of the cycle type.
struct Functional {
  enum class Kind { LogY, LogO, Delta, LogYT, LogOT, DeltaT, Dnk, DnkStar };
  Kind kind = Kind::LogY;
  std::size_t k = 0;

  // logY | logO | delta | logY_t | logO_t | delta_t | dnk:<k> | dnkstar:<k>
  static Functional parse(std::string_view s);
  std::string name() const;
};

// Truncated kinds use b_n for the cycle type's own n.
double evaluate(const Functional& f, const CycleType& ct, const MangoldtTable& table);

inline constexpr std::size_t kEnumerationCeiling = 60;

// Streams every cycle type of n with its probability under the table's model.
void enumerate_cycle_types(std::size_t n, const LogWeightTable& h,
                           const std::function<void(const CycleType&, double)>& visit,
                           std::size_t ceiling = kEnumerationCeiling);
std::vector<std::pair<CycleType, double>> enumerate_cycle_types(
    std::size_t n, const LogWeightTable& h, std::size_t ceiling = kEnumerationCeiling);

// Values merged when closer than 1e-9; sorted by value.
std::vector<std::pair<double, double>> exact_distribution(const Functional& f, std::size_t n,
                                                          const LogWeightTable& h,
                                                          const MangoldtTable& table);
double distribution_mean(const std::vector<std::pair<double, double>>& dist);

void write_distribution_csv(std::ostream& out, const std::vector<std::pair<double, double>>& dist,
                            const std::vector<std::string>& meta = {});
std::vector<std::pair<double, double>> read_distribution_csv(std::istream& in);

}  // namespace cyclemeter
