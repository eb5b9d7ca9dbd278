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

#include <cmath>
#include <numbers>

#include "cyclemeter/asymptotics.hpp"
#include "cyclemeter/error.hpp"

namespace cyclemeter {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

std::complex<double> lanczos_log_gamma(std::complex<double> z) {
  z -= 1.0;
  std::complex<double> x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const std::complex<double> t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

std::complex<double> complex_log_gamma(std::complex<double> z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    fail(ErrorKind::Domain, "log Gamma has a pole at nonpositive integers");
  if (z.real() >= 0.5) return lanczos_log_gamma(z);
  // Shift right; each log(z+k) stays off the cut when Im z != 0, so the sum
  // continues the principal branch.
  const int shift = static_cast<int>(std::ceil(0.5 - z.real()));
  std::complex<double> acc = 0.0;
  for (int k = 0; k < shift; ++k) acc += std::log(z + static_cast<double>(k));
  return lanczos_log_gamma(z + static_cast<double>(shift)) - acc;
}

}  // namespace cyclemeter
