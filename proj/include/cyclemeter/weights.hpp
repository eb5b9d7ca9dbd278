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

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cyclemeter {

// eps_m for generalized Ewens weights theta_m = (theta + eps_m) / r^m.
struct Perturbation {
  enum class Kind { Zero, Power, Geometric };
  Kind kind = Kind::Zero;
  double a = 0.0;
  double b = 0.0;  // decay exponent for Power, ratio q for Geometric

  double eps(std::size_t m) const;
  // Upper bound on sum_{m > M} |eps_m| / m.
  double tail_bound(std::size_t M) const;
  std::string spec() const;
};

// Tail rule used past the end of a custom table: c, or a * m^b.
struct TailRule {
  enum class Kind { None, Constant, Power };
  Kind kind = Kind::None;
  double a = 0.0;
  double b = 0.0;
};

struct ClassFClaim {
  double r;
  double theta;
  double K;
};

struct CustomTable {
  std::vector<double> theta;  // theta[0] is theta_1
  TailRule tail;
  std::optional<ClassFClaim> class_f;
  std::string source;
};

// Reads the `m,theta` CSV with optional `#tail=` and `#classF=` directives.
CustomTable load_custom_table(const std::string& path);

class WeightModel {
 public:
  enum class Kind { Uniform, Ewens, GeneralizedEwens, Polynomial, Custom, Tilted };

  static WeightModel uniform();
  static WeightModel ewens(double theta);
  static WeightModel generalized_ewens(double r, double theta, Perturbation eps,
                                       std::optional<double> K = std::nullopt);
  static WeightModel polynomial(double gamma);
  static WeightModel custom(CustomTable table);
  // Grammar: uniform | ewens:<t> | poly:<g> | custom:<path>
  //        | genewens:r=<r>,theta=<t>,eps=<zero|pow:a:b|geom:a:q>[,K=<k>]
  static WeightModel parse(std::string_view spec);

  Kind kind() const { return kind_; }
  // False only for tilts with a nonzero imaginary exponent.
  bool is_real() const;

  double theta(std::size_t m) const;
  std::complex<double> theta_complex(std::size_t m) const;
  // log|theta_m|, -inf for zero weights.
  double log_theta(std::size_t m) const;

  double ewens_theta() const { return param_; }
  double gamma() const { return param_; }
  double radius() const { return r_; }
  const Perturbation& perturbation() const { return eps_; }
  const std::optional<double>& declared_K() const { return K_; }
  const CustomTable& custom_table() const { return *custom_; }
  const WeightModel& base() const { return *base_; }
  std::complex<double> tilt_exponent() const { return s_; }

  // Canonical weight-spec string, used in output metadata.
  std::string spec() const;

  friend WeightModel tilt(const WeightModel& model, std::complex<double> s);

 private:
  Kind kind_ = Kind::Uniform;
  double param_ = 1.0;
  double r_ = 1.0;
  Perturbation eps_;
  std::optional<double> K_;
  std::shared_ptr<const CustomTable> custom_;
  std::shared_ptr<const WeightModel> base_;
  std::complex<double> s_{0.0, 0.0};
};

// theta'_m = theta_m * m^s. Tilts compose additively; a total exponent of 0
// returns the untilted model.
WeightModel tilt(const WeightModel& model, std::complex<double> s);

struct SingularityParams {
  double r;
  double theta;
  double K;
  bool K_estimated = false;
  std::size_t K_terms = 0;
  double K_tail_bound = 0.0;
  bool declared = false;  // taken on trust from a custom table
};

inline constexpr std::size_t kDefaultKTerms = 1'000'000;

// (r, theta, K) for class-F models; classification error otherwise.
SingularityParams singularity_params(const WeightModel& model,
                                     std::size_t K_terms = kDefaultKTerms);

}  // namespace cyclemeter
