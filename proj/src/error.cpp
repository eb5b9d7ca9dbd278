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

#include "cyclemeter/error.hpp"

namespace cyclemeter {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Range: return "range";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Definition: return "definition";
    case ErrorKind::Classification: return "classification";
    case ErrorKind::Representation: return "representation";
    case ErrorKind::NumericRange: return "numeric-range";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Data: return "data";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace cyclemeter
