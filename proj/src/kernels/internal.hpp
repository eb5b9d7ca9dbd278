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

namespace cyclemeter::kernels::detail {

// Cody-Waite split of ln 2; the high part has trailing zero bits so k*hi is
// exact for |k| < 2^11.
inline constexpr double kLog2e = 1.44269504088896338700e+00;
inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kExpLow = -708.0;
inline constexpr double kExpHigh = 709.0;

// Taylor coefficients 1/k! for k = 13 down to 2. |r| <= ln2/2 keeps the
// truncation error below 1e-17 relative.
inline constexpr double kExpCoeff[] = {
    1.0 / 6227020800.0,  // 13!
    1.0 / 479001600.0,   // 12!
    1.0 / 39916800.0,    // 11!
    1.0 / 3628800.0,     // 10!
    1.0 / 362880.0,      // 9!
    1.0 / 40320.0,       // 8!
    1.0 / 5040.0,        // 7!
    1.0 / 720.0,         // 6!
    1.0 / 120.0,         // 5!
    1.0 / 24.0,          // 4!
    1.0 / 6.0,           // 3!
    0.5,                 // 2!
};

inline constexpr std::size_t kLanes = 8;

}  // namespace cyclemeter::kernels::detail
