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

#include <cstdlib>
#include <fstream>

#include "cyclemeter/asymptotics.hpp"
#include "cyclemeter/error.hpp"
#include "text.hpp"

#ifndef CYCLEMETER_DATA_DIR
#define CYCLEMETER_DATA_DIR "data"
#endif

namespace cyclemeter {

ZetaZeros ZetaZeros::from(std::vector<double> imag_parts) {
  for (std::size_t i = 0; i < imag_parts.size(); ++i) {
    if (!(imag_parts[i] > 0.0)) fail(ErrorKind::Data, "zeta zero ordinates must be positive");
    if (i > 0 && !(imag_parts[i] > imag_parts[i - 1]))
      fail(ErrorKind::Data, "zeta zero ordinates must be ascending");
  }
  ZetaZeros z;
  z.t_ = std::move(imag_parts);
  return z;
}

ZetaZeros ZetaZeros::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Data, "cannot open zeros file '" + path + "'");
  std::vector<double> t;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view s = text::trim(line);
    if (s.empty() || s.front() == '#') continue;
    t.push_back(text::parse_double(s, "zero ordinate"));
  }
  return from(std::move(t));
}

std::string ZetaZeros::bundled_path() {
  if (const char* env = std::getenv("CYCLEMETER_ZEROS"); env && *env) return env;
  return std::string(CYCLEMETER_DATA_DIR) + "/zeta_zeros.txt";
}

ZetaZeros ZetaZeros::bundled() { return load(bundled_path()); }

ZetaZeros ZetaZeros::first(std::size_t k) const {
  ZetaZeros z;
  z.t_.assign(t_.begin(), t_.begin() + static_cast<std::ptrdiff_t>(std::min(k, t_.size())));
  return z;
}

}  // namespace cyclemeter
