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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclemeter/asymptotics.hpp"
#include "cyclemeter/error.hpp"

namespace cyclemeter::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Regime { Full, Truncated };

struct ExperimentSpec {
  std::string subcommand;
  std::string weights = "uniform";
  std::vector<std::size_t> n;  // ascending
  std::uint64_t samples = 10'000;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 picks the available parallelism
  std::string functional = "logY";
  std::string out = "-";
  std::string format;  // csv | json; empty picks the subcommand default
  std::optional<Regime> regime;  // empty picks the subcommand default
  Form form = Form::Derived;

  bool exact = false;        // expect: series instead of Monte Carlo
  std::vector<double> s;     // mgf exponents
  std::vector<double> t;     // ldp tilts
  std::vector<double> x;     // dev thresholds, ldp rate points
  std::vector<std::size_t> k = {2};
  std::string pair;          // compare
  std::size_t bins = 20;
  double bin_width = 0.25;   // llt
  std::size_t zeros = 100;
  std::string zeros_path;    // empty: CYCLEMETER_ZEROS or the bundled table
};

// Throws ErrorKind::Parse when the spec breaks its invariants.
void validate(const ExperimentSpec& spec);

// Runs one experiment. Output goes to `spec.out`, or to `out` when it is "-".
void run(const ExperimentSpec& spec, std::ostream& out);

// Usage errors 2, capacity 3, numeric range 4, anything else 1.
int exit_code(ErrorKind kind);

// Full command line handling; argv[0] is the program name.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Any CSV the tool writes: '#' metadata lines, a header, then rows.
struct Table {
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;

  std::size_t rows() const { return cells.size(); }
  std::size_t column(std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view col) const;
  double number(std::size_t row, std::string_view col) const;
};

Table read_table(std::istream& in);

}  // namespace cyclemeter::cli
