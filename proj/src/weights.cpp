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

#include "cyclemeter/weights.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "cyclemeter/error.hpp"
#include "text.hpp"

namespace cyclemeter {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorKind::Validation, std::string(what) + " must be positive and finite");
}

}  // namespace

double Perturbation::eps(std::size_t m) const {
  const double dm = static_cast<double>(m);
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Power: return a * std::pow(dm, -b);
    case Kind::Geometric: return a * std::pow(b, dm);
  }
  return 0.0;
}

double Perturbation::tail_bound(std::size_t M) const {
  const double dm = static_cast<double>(M);
  switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::Power: return std::abs(a) * std::pow(dm, -b) / b;
    case Kind::Geometric:
      return std::abs(a) * std::pow(std::abs(b), dm + 1.0) / ((dm + 1.0) * (1.0 - std::abs(b)));
  }
  return 0.0;
}

std::string Perturbation::spec() const {
  switch (kind) {
    case Kind::Zero: return "zero";
    case Kind::Power: return "pow:" + text::num(a) + ":" + text::num(b);
    case Kind::Geometric: return "geom:" + text::num(a) + ":" + text::num(b);
  }
  return "zero";
}

CustomTable load_custom_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Data, "cannot open weight table '" + path + "'");
  CustomTable t;
  t.source = path;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = text::trim(line);
    if (s.empty()) continue;
    if (s.front() == '#') {
      std::string_view d = text::trim(s.substr(1));
      if (d.starts_with("tail=")) {
        const auto parts = text::split(d.substr(5), ',');
        if (parts.size() == 1) {
          t.tail = {TailRule::Kind::Constant, text::parse_double(parts[0], "tail constant"), 0.0};
        } else if (parts.size() == 2) {
          t.tail = {TailRule::Kind::Power, text::parse_double(parts[0], "tail a"),
                    text::parse_double(parts[1], "tail b")};
        } else {
          fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": bad #tail directive");
        }
      } else if (d.starts_with("classF=")) {
        const auto parts = text::split(d.substr(7), ',');
        if (parts.size() != 3)
          fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": bad #classF directive");
        t.class_f = ClassFClaim{text::parse_double(parts[0], "classF r"),
                                text::parse_double(parts[1], "classF theta"),
                                text::parse_double(parts[2], "classF K")};
      }
      continue;
    }
    if (!header) {
      if (s != "m,theta") fail(ErrorKind::Parse, path + ": expected header 'm,theta'");
      header = true;
      continue;
    }
    const auto cells = text::split(s, ',');
    if (cells.size() != 2)
      fail(ErrorKind::Parse, path + ":" + std::to_string(lineno) + ": expected two columns");
    const double m = text::parse_double(cells[0], "m");
    const double th = text::parse_double(cells[1], "theta");
    if (m != static_cast<double>(t.theta.size() + 1))
      fail(ErrorKind::Definition, path + ":" + std::to_string(lineno) +
                                      ": rows must list m = 1, 2, 3, ... without gaps");
    if (!(th >= 0.0) || !std::isfinite(th))
      fail(ErrorKind::Validation, path + ":" + std::to_string(lineno) + ": theta must be >= 0");
    t.theta.push_back(th);
  }
  if (!header) fail(ErrorKind::Parse, path + ": missing header 'm,theta'");
  return t;
}

WeightModel WeightModel::uniform() { return WeightModel{}; }

WeightModel WeightModel::ewens(double theta) {
  require_positive(theta, "ewens theta");
  WeightModel w;
  w.kind_ = Kind::Ewens;
  w.param_ = theta;
  return w;
}

WeightModel WeightModel::generalized_ewens(double r, double theta, Perturbation eps,
                                           std::optional<double> K) {
  require_positive(r, "genewens r");
  require_positive(theta, "genewens theta");
  if (eps.kind == Perturbation::Kind::Power && !(eps.b > 0.0))
    fail(ErrorKind::Validation, "pow perturbation needs b > 0 for sum |eps_m|/m to converge");
  if (eps.kind == Perturbation::Kind::Geometric && !(std::abs(eps.b) < 1.0))
    fail(ErrorKind::Validation, "geom perturbation needs |q| < 1");
  // |eps_m| is nonincreasing, so the most negative value sits at m = 1 or 2.
  if (theta + eps.eps(1) < 0.0 || theta + eps.eps(2) < 0.0)
    fail(ErrorKind::Validation, "theta + eps_m must stay >= 0");
  WeightModel w;
  w.kind_ = Kind::GeneralizedEwens;
  w.param_ = theta;
  w.r_ = r;
  w.eps_ = eps;
  w.K_ = K;
  return w;
}

WeightModel WeightModel::polynomial(double gamma) {
  require_positive(gamma, "poly gamma");
  WeightModel w;
  w.kind_ = Kind::Polynomial;
  w.param_ = gamma;
  return w;
}

WeightModel WeightModel::custom(CustomTable table) {
  WeightModel w;
  w.kind_ = Kind::Custom;
  w.custom_ = std::make_shared<const CustomTable>(std::move(table));
  return w;
}

namespace {

Perturbation parse_eps(std::string_view s) {
  if (s == "zero") return {};
  const auto parts = text::split(s, ':');
  if (parts.size() == 3 && parts[0] == "pow")
    return {Perturbation::Kind::Power, text::parse_double(parts[1], "eps a"),
            text::parse_double(parts[2], "eps b")};
  if (parts.size() == 3 && parts[0] == "geom")
    return {Perturbation::Kind::Geometric, text::parse_double(parts[1], "eps a"),
            text::parse_double(parts[2], "eps q")};
  fail(ErrorKind::Parse, "eps rule must be zero, pow:<a>:<b> or geom:<a>:<q>, got '" +
                             std::string(s) + "'");
}

}  // namespace

WeightModel WeightModel::parse(std::string_view spec) {
  spec = text::trim(spec);
  if (spec == "uniform") return uniform();
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) fail(ErrorKind::Parse, "unknown weight spec '" + std::string(spec) + "'");
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = spec.substr(colon + 1);
  if (head == "ewens") return ewens(text::parse_double(rest, "ewens theta"));
  if (head == "poly") return polynomial(text::parse_double(rest, "poly gamma"));
  if (head == "custom") return custom(load_custom_table(std::string(rest)));
  if (head == "genewens") {
    std::optional<double> r, theta, K;
    Perturbation eps;
    for (std::string_view kv : text::split(rest, ',')) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string_view::npos) fail(ErrorKind::Parse, "genewens expects key=value pairs");
      const std::string_view key = text::trim(kv.substr(0, eq));
      const std::string_view val = text::trim(kv.substr(eq + 1));
      if (key == "r") r = text::parse_double(val, "r");
      else if (key == "theta") theta = text::parse_double(val, "theta");
      else if (key == "eps") eps = parse_eps(val);
      else if (key == "K") K = text::parse_double(val, "K");
      else fail(ErrorKind::Parse, "unknown genewens key '" + std::string(key) + "'");
    }
    if (!r || !theta) fail(ErrorKind::Parse, "genewens needs r= and theta=");
    return generalized_ewens(*r, *theta, eps, K);
  }
  fail(ErrorKind::Parse, "unknown weight family '" + std::string(head) + "'");
}

bool WeightModel::is_real() const { return kind_ != Kind::Tilted || s_.imag() == 0.0; }

double WeightModel::theta(std::size_t m) const {
  if (m == 0) fail(ErrorKind::Domain, "theta index starts at 1");
  const double dm = static_cast<double>(m);
  switch (kind_) {
    case Kind::Uniform: return 1.0;
    case Kind::Ewens: return param_;
    case Kind::GeneralizedEwens: return (param_ + eps_.eps(m)) / std::pow(r_, dm);
    case Kind::Polynomial: return std::pow(dm, param_);
    case Kind::Custom: {
      const auto& t = *custom_;
      if (m <= t.theta.size()) return t.theta[m - 1];
      switch (t.tail.kind) {
        case TailRule::Kind::Constant: return t.tail.a;
        case TailRule::Kind::Power: return t.tail.a * std::pow(dm, t.tail.b);
        case TailRule::Kind::None: break;
      }
      fail(ErrorKind::Definition, "custom table ends at m = " + std::to_string(t.theta.size()) +
                                      " and declares no tail rule");
    }
    case Kind::Tilted:
      if (s_.imag() != 0.0) fail(ErrorKind::Representation, "complex tilt has no real theta");
      return base_->theta(m) * std::pow(dm, s_.real());
  }
  return 0.0;
}

std::complex<double> WeightModel::theta_complex(std::size_t m) const {
  if (kind_ != Kind::Tilted || s_.imag() == 0.0) return theta(m);
  const double dm = static_cast<double>(m);
  return base_->theta(m) * std::exp(s_ * std::log(dm));
}

double WeightModel::log_theta(std::size_t m) const {
  if (m == 0) fail(ErrorKind::Domain, "theta index starts at 1");
  const double lm = std::log(static_cast<double>(m));
  switch (kind_) {
    case Kind::Uniform: return 0.0;
    case Kind::Ewens: return std::log(param_);
    case Kind::GeneralizedEwens: {
      const double v = param_ + eps_.eps(m);
      return (v > 0.0 ? std::log(v) : kNegInf) - static_cast<double>(m) * std::log(r_);
    }
    case Kind::Polynomial: return param_ * lm;
    case Kind::Tilted: {
      const double b = base_->log_theta(m);
      return b == kNegInf ? b : b + s_.real() * lm;
    }
    case Kind::Custom: {
      const double v = theta(m);
      return v > 0.0 ? std::log(v) : kNegInf;
    }
  }
  return 0.0;
}

std::string WeightModel::spec() const {
  switch (kind_) {
    case Kind::Uniform: return "uniform";
    case Kind::Ewens: return "ewens:" + text::num(param_);
    case Kind::Polynomial: return "poly:" + text::num(param_);
    case Kind::Custom: return "custom:" + custom_->source;
    case Kind::GeneralizedEwens: {
      std::string s = "genewens:r=" + text::num(r_) + ",theta=" + text::num(param_) +
                      ",eps=" + eps_.spec();
      if (K_) s += ",K=" + text::num(*K_);
      return s;
    }
    case Kind::Tilted: {
      std::string s = "tilt(" + base_->spec() + ",s=" + text::num(s_.real());
      if (s_.imag() != 0.0) s += (s_.imag() > 0 ? "+" : "") + text::num(s_.imag()) + "i";
      return s + ")";
    }
  }
  return "";
}

WeightModel tilt(const WeightModel& model, std::complex<double> s) {
  const WeightModel* base = &model;
  std::complex<double> total = s;
  if (model.kind_ == WeightModel::Kind::Tilted) {
    base = model.base_.get();
    total += model.s_;
  }
  if (total == std::complex<double>(0.0, 0.0)) return *base;
  WeightModel w;
  w.kind_ = WeightModel::Kind::Tilted;
  w.base_ = std::make_shared<const WeightModel>(*base);
  w.s_ = total;
  return w;
}

SingularityParams singularity_params(const WeightModel& model, std::size_t K_terms) {
  using Kind = WeightModel::Kind;
  switch (model.kind()) {
    case Kind::Uniform: return {1.0, 1.0, 0.0};
    case Kind::Ewens: return {1.0, model.ewens_theta(), 0.0};
    case Kind::GeneralizedEwens: {
      SingularityParams p{model.radius(), model.ewens_theta(), 0.0};
      if (model.declared_K()) {
        p.K = *model.declared_K();
        return p;
      }
      const Perturbation& eps = model.perturbation();
      if (eps.kind == Perturbation::Kind::Zero) return p;
      // Smallest terms first.
      double sum = 0.0;
      for (std::size_t m = K_terms; m >= 1; --m) sum += eps.eps(m) / static_cast<double>(m);
      p.K = sum;
      p.K_estimated = true;
      p.K_terms = K_terms;
      p.K_tail_bound = eps.tail_bound(K_terms);
      return p;
    }
    case Kind::Custom:
      if (const auto& c = model.custom_table().class_f) {
        SingularityParams p{c->r, c->theta, c->K};
        p.declared = true;
        return p;
      }
      fail(ErrorKind::Classification, "custom table declares no class-F membership; not in F(r,theta,K)");
    case Kind::Polynomial:
      fail(ErrorKind::Classification, "polynomial weights are not in F(r,theta,K)");
    case Kind::Tilted:
      fail(ErrorKind::Classification, "tilted weights are not in F(r,theta,K)");
  }
  fail(ErrorKind::Classification, "unknown model");
}

}  // namespace cyclemeter
