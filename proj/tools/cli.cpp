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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyclemeter/numtheory.hpp"
#include "cyclemeter/permstat.hpp"
#include "cyclemeter/sampler.hpp"
#include "cyclemeter/series.hpp"
#include "cyclemeter/weights.hpp"
#include "text.hpp"

namespace cyclemeter::cli {
namespace {

using Json = nlohmann::ordered_json;
using Meta = std::vector<std::pair<std::string, std::string>>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// One line of a plot-ready long table.
struct Row {
  std::size_t n;
  std::string quantity;
  double exact;
  double asymptotic;
};

struct Context {
  const ExperimentSpec& spec;
  std::string command;
  WeightModel model;
  Regime regime = Regime::Full;
  bool monte_carlo = false;
  bool uses_zeros = false;
  bool uses_form = false;

  bool poly() const { return model.kind() == WeightModel::Kind::Polynomial; }
  unsigned workers() const { return spec.workers ? spec.workers : default_workers(); }
  Truncation trunc(std::size_t n) const {
    return regime == Regime::Truncated ? Truncation(truncation_b(n)) : std::nullopt;
  }
  double theta() const { return singularity_params(model).theta; }
  RateFamily family() const {
    return poly() ? RateFamily::poly(model.gamma()) : RateFamily::ge(theta(), spec.form);
  }
  ZetaZeros zeros() const {
    ZetaZeros all = spec.zeros_path.empty() ? ZetaZeros::bundled() : ZetaZeros::load(spec.zeros_path);
    if (all.count() < spec.zeros)
      fail(ErrorKind::Data, "zeros table has " + std::to_string(all.count()) + " entries, " +
                                std::to_string(spec.zeros) + " requested");
    return all.first(spec.zeros);
  }

  // The worker count is deliberately absent: outputs must not depend on it.
  Meta meta() const {
    Meta m{{"version", kVersion}, {"command", command}};
    if (command != "psi") m.emplace_back("weights", model.spec());
    m.emplace_back("seed", std::to_string(spec.seed));
    if (monte_carlo) m.emplace_back("samples", std::to_string(spec.samples));
    m.emplace_back("regime", regime == Regime::Truncated ? "truncated" : "full");
    if (uses_form) m.emplace_back("form", spec.form == Form::Derived ? "derived" : "literal");
    if (uses_zeros) m.emplace_back("zeros", std::to_string(spec.zeros));
    return m;
  }
  std::vector<std::string> meta_lines() const {
    std::vector<std::string> lines{std::string("cyclemeter ") + kVersion};
    for (const auto& [k, v] : meta())
      if (k != "version") lines.push_back(k + "=" + v);
    return lines;
  }
  Json meta_json() const {
    Json j;
    for (const auto& [k, v] : meta()) j[k] = v;
    return j;
  }
};

void write_meta(std::ostream& out, const Context& ctx) {
  for (const auto& line : ctx.meta_lines()) out << "# " << line << '\n';
}

void write_rows_csv(std::ostream& out, const Context& ctx, const std::vector<Row>& rows) {
  write_meta(out, ctx);
  out << "n,quantity,exact,asymptotic,diff\n";
  for (const auto& r : rows)
    out << r.n << ',' << r.quantity << ',' << fmt(r.exact) << ',' << fmt(r.asymptotic) << ','
        << fmt(r.exact - r.asymptotic) << '\n';
}

Json rows_json(const std::vector<Row>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows)
    arr.push_back({{"n", r.n},
                   {"quantity", r.quantity},
                   {"exact", r.exact},
                   {"asymptotic", r.asymptotic},
                   {"diff", r.exact - r.asymptotic}});
  return arr;
}

void emit_rows(std::ostream& out, const Context& ctx, const std::vector<Row>& rows,
               const std::string& format, Json extra = Json::object()) {
  if (format == "csv") return write_rows_csv(out, ctx, rows);
  Json j;
  j["meta"] = ctx.meta_json();
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  j["rows"] = rows_json(rows);
  out << j.dump(2) << '\n';
}

bool needs_mangoldt(const Functional& f) {
  using K = Functional::Kind;
  return f.kind == K::LogO || f.kind == K::LogOT || f.kind == K::Delta || f.kind == K::DeltaT;
}

MangoldtTable mangoldt_for(std::size_t n) { return build_mangoldt_table(std::max<std::size_t>(n, 2)); }

double exact_mean(const Functional& f, const LogWeightTable& h, std::size_t n,
                  const MangoldtTable& mg) {
  using K = Functional::Kind;
  const Truncation b = truncation_b(n);
  switch (f.kind) {
    case K::LogY: return expect_logY_exact(h, n);
    case K::LogYT: return expect_logY_exact(h, n, b);
    case K::LogO: return expect_logO_exact(h, n, mg);
    case K::LogOT: return expect_logO_exact(h, n, mg, b);
    case K::Delta: return expect_logY_exact(h, n) - expect_logO_exact(h, n, mg);
    case K::DeltaT: return expect_logY_exact(h, n, b) - expect_logO_exact(h, n, mg, b);
    case K::Dnk: return expect_dnk_exact(h, n, f.k);
    case K::DnkStar: return 1.0 - p_dnk_zero(h, n, f.k);
  }
  return kNaN;
}

std::vector<double> sample_functional(const Context& ctx, const LogWeightTable& h, std::size_t n,
                                      const Functional& f, const MangoldtTable& mg) {
  return sample_values(h, n, ctx.spec.samples, ctx.spec.seed, ctx.workers(),
                       [&](const CycleType& ct) { return evaluate(f, ct, mg); });
}

double lambda_poly(double n, double gamma) {
  return gamma_tilde(0.0, gamma).g1 * std::pow(n, gamma / (1.0 + gamma));
}

// Centering and scale of the central limit theorem for log O_n.
std::pair<double, double> clt_normalizers(const Context& ctx, double n) {
  const double ln = std::log(n);
  if (ctx.poly()) {
    const double g = ctx.model.gamma(), a2 = (1.0 + g) * (1.0 + g);
    const double lam = lambda_poly(n, g);
    return {lam * ln / a2, std::sqrt(lam) * ln / a2};
  }
  const double th = ctx.theta();
  return {0.5 * th * ln * ln, std::sqrt(th / 3.0 * ln * ln * ln)};
}

std::string label(const std::string& name, double v) { return name + "=" + text::num(v); }

// ---- row generators shared by the subcommands and `compare` ----

std::vector<Row> h_rows(const Context& ctx, const LogWeightTable& h) {
  std::vector<Row> rows;
  std::optional<SingularityParams> sp;
  if (!ctx.poly()) sp = singularity_params(ctx.model);
  for (std::size_t n : ctx.spec.n) {
    const double asym = ctx.poly() ? h_asym_poly(ctx.model.gamma(), double(n))
                                   : h_asym_ge(sp->r, sp->theta, sp->K, double(n));
    rows.push_back({n, "log_h", h.log_h[n], asym});
  }
  return rows;
}

std::vector<Row> elogy_rows(const Context& ctx, const LogWeightTable& h) {
  std::vector<Row> rows;
  for (std::size_t n : ctx.spec.n) {
    const Truncation b = ctx.trunc(n);
    double asym;
    if (ctx.poly()) {
      const double g = ctx.model.gamma();
      asym = lambda_poly(double(n), g) * std::log(double(n)) / ((1.0 + g) * (1.0 + g));
    } else {
      const double lb = std::log(double(b.value_or(n)));
      asym = 0.5 * ctx.theta() * lb * lb;
    }
    rows.push_back({n, b ? "E_logY_t" : "E_logY", expect_logY_exact(h, n, b), asym});
  }
  return rows;
}

std::vector<Row> mgf_rows(const Context& ctx, const LogWeightTable& h) {
  const std::vector<double> svals = ctx.spec.s.empty() ? std::vector<double>{0.5} : ctx.spec.s;
  std::vector<Row> rows;
  for (std::size_t n : ctx.spec.n) {
    for (double s : svals) {
      const Truncation b = ctx.trunc(n);
      const double exact = mgf_logY_exact(h, n, s, b).real();
      double asym = kNaN;
      if (ctx.poly() && !b) asym = mgf_asym_poly(s, double(n), ctx.model.gamma());
      if (!ctx.poly() && b) asym = mgf_trunc_asym(s, n, ctx.theta(), ctx.spec.form).real();
      rows.push_back({n, label("mgf:s", s), exact, asym});
    }
  }
  return rows;
}

std::vector<Row> dnk_rows(const Context& ctx, const LogWeightTable& h, bool want_e, bool want_p0) {
  const double th = ctx.theta();
  std::vector<Row> rows;
  for (std::size_t n : ctx.spec.n) {
    for (std::size_t k : ctx.spec.k) {
      if (k < 1 || k > n) fail(ErrorKind::Parse, "--k must lie in 1..n");
      const DnkAsym a = dnk_asym(double(n), double(k), th);
      const std::string tag = "k=" + std::to_string(k);
      if (want_e) rows.push_back({n, "E_D:" + tag, expect_dnk_exact(h, n, k), a.E_main});
      if (want_p0) rows.push_back({n, "P0:" + tag, p_dnk_zero(h, n, k), a.P_zero_main});
    }
  }
  return rows;
}

double ldp_speed(const Context& ctx, double n) {
  return ctx.poly() ? std::pow(n, ctx.model.gamma() / (1.0 + ctx.model.gamma())) : std::log(n);
}

// (1/speed) log E[exp((t / log n) log Y)], truncated per the regime.
double scaled_cgf(const Context& ctx, const LogWeightTable& h, std::size_t n, double t) {
  const double ln = std::log(double(n));
  return log_mgf_logY_exact(h, n, t / ln, ctx.trunc(n)) / ldp_speed(ctx, double(n));
}

std::vector<Row> ldp_rows(const Context& ctx, const LogWeightTable& h) {
  const RateFamily fam = ctx.family();
  const std::vector<double> tvals = ctx.spec.t.empty() ? std::vector<double>{-1.0, 1.0} : ctx.spec.t;
  std::vector<Row> rows;
  for (std::size_t n : ctx.spec.n) {
    for (double t : tvals) rows.push_back({n, label("cgf:t", t), scaled_cgf(ctx, h, n, t), chi(fam, t)});
    if (ctx.spec.x.empty()) continue;
    // Legendre transform of the exact cumulant on t in [-4, 4]; a lower
    // bound wherever the maximizer falls outside that window.
    std::vector<std::pair<double, double>> grid;
    for (int i = -80; i <= 80; ++i) {
      const double t = 0.05 * i;
      grid.emplace_back(t, i == 0 ? 0.0 : scaled_cgf(ctx, h, n, t));
    }
    for (double x : ctx.spec.x) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& [t, c] : grid) best = std::max(best, t * x - c);
      rows.push_back({n, label("rate:x", x), best, rate_function(fam, x)});
    }
  }
  return rows;
}

std::vector<Row> elogo_rows(const Context& ctx, const LogWeightTable& h) {
  if (ctx.poly()) fail(ErrorKind::Classification, "elogo needs a class-F weight model");
  const double th = ctx.theta();
  const ZetaZeros zeros = ctx.zeros();
  const ZetaZeros half = zeros.first(std::max<std::size_t>(1, zeros.count() / 2));
  const MangoldtTable mg = mangoldt_for(ctx.spec.n.back());
  std::vector<Row> rows;
  for (std::size_t n : ctx.spec.n) {
    const std::size_t b = truncation_b(n);
    if (ctx.regime == Regime::Truncated) {
      const double exact = expect_logO_exact(h, n, mg, b);
      rows.push_back({n, "E_logO_t:expansion", exact, expect_logO_trunc_expansion(ctx.model, n, mg)});
      const ZeroExpansion z = expect_logO_expansion_zeros(n, th, zeros, ExpansionKind::Truncated,
                                                          std::nullopt, ctx.spec.form);
      rows.push_back({n, "E_logO_t:zeros", exact, z.value});
      const ZeroSum zh = gamma_zero_sum(z.X, half);
      rows.push_back({n, "zero_sum:self", z.zero_sum, zh.value});
      rows.push_back({n, "zero_sum:imag", z.imag_residue, 0.0});
    } else {
      const double exact = expect_logO_exact(h, n, mg);
      const double ln = std::log(double(n));
      rows.push_back({n, "E_logO:erdos_turan", exact, 0.5 * th * ln * ln});
      const ZeroExpansion z = expect_logO_expansion_zeros(n, th, zeros, ExpansionKind::Full,
                                                          expect_logY_exact(h, n), ctx.spec.form);
      rows.push_back({n, "E_logO:zeros", exact, z.value});
      rows.push_back({n, "zero_sum:imag", z.imag_residue, 0.0});
    }
  }
  return rows;
}

std::vector<Row> psi_rows(const Context& ctx) {
  const ZetaZeros zeros = ctx.zeros();
  const MangoldtTable mg = mangoldt_for(ctx.spec.n.back());
  std::vector<Row> rows;
  for (std::size_t x : ctx.spec.n) {
    if (x < 2) fail(ErrorKind::Parse, "psi needs x >= 2");
    const double psi = chebyshev_psi(mg, x);
    rows.push_back({x, "psi:zeros=" + std::to_string(zeros.count()), psi,
                    psi_explicit(double(x), zeros).value});
    rows.push_back({x, "psi_over_x", psi / double(x), 1.0});
  }
  return rows;
}

// ---- subcommands ----

std::string default_format(const std::string& cmd) {
  return (cmd == "clt" || cmd == "llt" || cmd == "ldp" || cmd == "dev") ? "json" : "csv";
}

Regime default_regime(const std::string& cmd, bool poly) {
  if (!poly && (cmd == "mgf" || cmd == "ldp" || cmd == "elogo")) return Regime::Truncated;
  return Regime::Full;
}

void cmd_h_table(const Context& ctx, const std::string& format, std::ostream& out) {
  const LogWeightTable h = h_table(ctx.model, ctx.spec.n.back());
  if (format == "csv") return write_h_table_csv(out, h, ctx.meta_lines());
  Json j;
  j["meta"] = ctx.meta_json();
  Json ns = Json::array();
  for (std::size_t i = 0; i <= h.limit(); ++i) ns.push_back(i);
  j["n"] = ns;
  j["log_h"] = h.log_h;
  out << j.dump(2) << '\n';
}

void cmd_sample(const Context& ctx, const std::string& format, std::ostream& out) {
  const std::size_t n = ctx.spec.n.back();
  const Functional f = Functional::parse(ctx.spec.functional);
  const LogWeightTable h = h_table(ctx.model, n);
  const MangoldtTable mg = mangoldt_for(needs_mangoldt(f) ? n : 2);
  const std::vector<double> v = sample_functional(ctx, h, n, f, mg);
  if (format == "csv") {
    std::vector<std::string> meta = ctx.meta_lines();
    meta.push_back("stat=" + f.name());
    meta.push_back("n=" + std::to_string(n));
    return write_raw_csv(out, v, meta);
  }
  Meta meta = ctx.meta();
  meta.emplace_back("stat", f.name());
  meta.emplace_back("n", std::to_string(n));
  out << stats_json(summarize(v, ctx.spec.bins), meta) << '\n';
}

void cmd_expect(const Context& ctx, const std::string& format, std::ostream& out) {
  const Functional f = Functional::parse(ctx.spec.functional);
  const LogWeightTable h = h_table(ctx.model, ctx.spec.n.back());
  const MangoldtTable mg = mangoldt_for(needs_mangoldt(f) ? ctx.spec.n.back() : 2);
  struct Result { std::size_t n; double value, se; };
  std::vector<Result> res;
  for (std::size_t n : ctx.spec.n) {
    if (ctx.spec.exact) {
      res.push_back({n, exact_mean(f, h, n, mg), 0.0});
    } else {
      const SampleStats st = summarize(sample_functional(ctx, h, n, f, mg), ctx.spec.bins);
      res.push_back({n, st.mean, st.se});
    }
  }
  const std::string method = ctx.spec.exact ? "exact" : "mc";
  if (format == "csv") {
    write_meta(out, ctx);
    out << "n,stat,method,value,se\n";
    for (const auto& r : res)
      out << r.n << ',' << f.name() << ',' << method << ',' << fmt(r.value) << ',' << fmt(r.se) << '\n';
    return;
  }
  Json j;
  j["meta"] = ctx.meta_json();
  j["stat"] = f.name();
  j["method"] = method;
  Json arr = Json::array();
  for (const auto& r : res) arr.push_back({{"n", r.n}, {"value", r.value}, {"se", r.se}});
  j["rows"] = arr;
  out << j.dump(2) << '\n';
}

void cmd_dist(const Context& ctx, const std::string& format, std::ostream& out) {
  const std::size_t n = ctx.spec.n.back();
  const Functional f = Functional::parse(ctx.spec.functional);
  const LogWeightTable h = h_table(ctx.model, n);
  const MangoldtTable mg = mangoldt_for(n);
  const auto dist = exact_distribution(f, n, h, mg);
  if (format == "csv") {
    std::vector<std::string> meta = ctx.meta_lines();
    meta.push_back("stat=" + f.name());
    meta.push_back("n=" + std::to_string(n));
    return write_distribution_csv(out, dist, meta);
  }
  Json j;
  j["meta"] = ctx.meta_json();
  j["stat"] = f.name();
  j["n"] = n;
  std::vector<double> vals, probs;
  for (const auto& [v, p] : dist) {
    vals.push_back(v);
    probs.push_back(p);
  }
  j["value"] = vals;
  j["probability"] = probs;
  out << j.dump(2) << '\n';
}

void cmd_clt(const Context& ctx, const std::string& format, std::ostream& out) {
  const std::size_t n = ctx.spec.n.back();
  const LogWeightTable h = h_table(ctx.model, n);
  const MangoldtTable mg = mangoldt_for(n);
  const Functional f = Functional::parse(ctx.regime == Regime::Truncated ? "logO_t" : "logO");
  std::vector<double> z = sample_functional(ctx, h, n, f, mg);
  const auto [centering, scale] = clt_normalizers(ctx, double(n));
  for (double& v : z)
    v = ctx.poly() ? erdos_turan_standardize_poly(v, double(n), ctx.model.gamma())
                   : erdos_turan_standardize(v, double(n), ctx.theta());
  const double ks = ks_distance(std::move(z), standard_normal_cdf);
  if (format == "csv") return write_rows_csv(out, ctx, {{n, "ks_distance", ks, 0.0}});
  Json j;
  j["meta"] = ctx.meta_json();
  j["ks_distance"] = ks;
  j["n"] = n;
  j["samples"] = ctx.spec.samples;
  j["centering"] = centering;
  j["scale"] = scale;
  out << j.dump(2) << '\n';
}

void cmd_llt(const Context& ctx, const std::string& format, std::ostream& out) {
  const std::size_t n = ctx.spec.n.back();
  const LogWeightTable h = h_table(ctx.model, n);
  const MangoldtTable mg = mangoldt_for(n);
  const LltConstants c = llt_constants(double(n), ctx.theta());
  const Functional f = Functional::parse(ctx.regime == Regime::Truncated ? "logO_t" : "logO");
  const std::vector<double> v = sample_functional(ctx, h, n, f, mg);
  const std::size_t bins = ctx.spec.bins;
  const double w = ctx.spec.bin_width, lo0 = -0.5 * w * double(bins);
  std::vector<std::uint64_t> counts(bins, 0);
  for (double L : v) {
    const double o = (L - c.centering) / c.scale;
    const double pos = std::floor((o - lo0) / w);
    if (pos >= 0.0 && pos < double(bins)) ++counts[std::size_t(pos)];
  }
  const double limit = w / std::sqrt(2.0 * std::numbers::pi);
  std::vector<Row> rows;
  Json bin_json = Json::array();
  for (std::size_t i = 0; i < bins; ++i) {
    const double lo = lo0 + w * double(i), hi = lo + w;
    const double scaled = c.sigma * double(counts[i]) / double(ctx.spec.samples);
    rows.push_back({n, "bin:" + text::num(lo) + ":" + text::num(hi), scaled, limit});
    bin_json.push_back({{"lo", lo}, {"hi", hi}, {"count", counts[i]}, {"scaled_probability", scaled},
                        {"limit", limit}});
  }
  if (format == "csv") return write_rows_csv(out, ctx, rows);
  Json j;
  j["meta"] = ctx.meta_json();
  j["n"] = n;
  j["samples"] = ctx.spec.samples;
  j["sigma"] = c.sigma;
  j["centering"] = c.centering;
  j["scale"] = c.scale;
  j["bins"] = bin_json;
  out << j.dump(2) << '\n';
}

void cmd_dev(const Context& ctx, const std::string& format, std::ostream& out) {
  const std::size_t n = ctx.spec.n.back();
  const double dn = double(n), ln = std::log(dn);
  const LogWeightTable h = h_table(ctx.model, n);
  const MangoldtTable mg = mangoldt_for(n);
  const RateFamily fam = ctx.family();
  const Functional f = Functional::parse(ctx.regime == Regime::Truncated ? "logO_t" : "logO");
  std::vector<double> o = sample_functional(ctx, h, n, f, mg);
  double threshold_unit;
  if (ctx.poly()) {
    const double g = ctx.model.gamma(), lam = lambda_poly(dn, g);
    for (double& v : o) v = ((1.0 + g) * (1.0 + g) * v - lam * ln) / (std::cbrt(lam) * ln);
    threshold_unit = std::cbrt(lam);
  } else {
    const LltConstants c = llt_constants(dn, ctx.theta());
    for (double& v : o) v = (v - c.centering) / c.scale;
    threshold_unit = c.sigma * c.sigma;
  }
  const std::vector<double> xs = ctx.spec.x.empty() ? std::vector<double>{0.5, 1.0} : ctx.spec.x;
  std::vector<Row> rows;
  for (double x : xs) {
    const double cut = x * threshold_unit;
    const auto hits = std::count_if(o.begin(), o.end(), [&](double v) { return v >= cut; });
    rows.push_back({n, label("tail:x", x), double(hits) / double(ctx.spec.samples),
                    precise_dev(fam, x, dn).value});
  }
  Json extra;
  extra["n"] = n;
  extra["samples"] = ctx.spec.samples;
  extra["threshold_unit"] = threshold_unit;
  emit_rows(out, ctx, rows, format, extra);
}

std::vector<Row> filter(std::vector<Row> rows, const std::string& prefix) {
  std::erase_if(rows, [&](const Row& r) { return r.quantity.rfind(prefix, 0) != 0; });
  return rows;
}

double pair_arg(const std::string& pair, std::size_t colon) {
  if (colon == std::string::npos) fail(ErrorKind::Parse, "pair '" + pair + "' needs an argument");
  return text::parse_double(pair.substr(colon + 1), "--pair");
}

std::size_t pair_count(const std::string& pair, std::size_t colon) {
  const double v = pair_arg(pair, colon);
  if (!(v >= 1.0) || v != std::floor(v)) fail(ErrorKind::Parse, "pair '" + pair + "' needs an integer");
  return std::size_t(v);
}

std::ostream& sink(const ExperimentSpec& spec, std::ostream& out, std::ofstream& file) {
  if (spec.out == "-" || spec.out.empty()) return out;
  file.open(spec.out, std::ios::binary);
  if (!file) fail(ErrorKind::Data, "cannot open " + spec.out + " for writing");
  return file;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::Capacity: return 3;
    case ErrorKind::NumericRange: return 4;
    default: return 1;
  }
}

void validate(const ExperimentSpec& spec) {
  static const std::vector<std::string> known = {"h-table", "sample", "expect", "dist", "mgf",
                                                 "dnk", "clt", "llt", "ldp", "dev", "elogo",
                                                 "psi", "compare"};
  if (std::find(known.begin(), known.end(), spec.subcommand) == known.end())
    fail(ErrorKind::Parse, "unknown subcommand '" + spec.subcommand + "'");
  if (spec.n.empty()) fail(ErrorKind::Parse, "--n is required");
  for (std::size_t i = 1; i < spec.n.size(); ++i)
    if (spec.n[i] <= spec.n[i - 1]) fail(ErrorKind::Parse, "--n grid must be strictly ascending");
  if (spec.samples < 1) fail(ErrorKind::Parse, "--samples must be >= 1");
  if (!spec.format.empty() && spec.format != "csv" && spec.format != "json")
    fail(ErrorKind::Parse, "--format must be csv or json");
  if (spec.bins < 1) fail(ErrorKind::Parse, "--bins must be >= 1");
  if (!(spec.bin_width > 0.0)) fail(ErrorKind::Parse, "--bin-width must be positive");
  if (spec.zeros < 1) fail(ErrorKind::Parse, "--zeros must be >= 1");
  if (spec.subcommand != "psi") (void)WeightModel::parse(spec.weights);
  if (spec.subcommand == "compare" && spec.pair.empty()) fail(ErrorKind::Parse, "--pair is required");
}

void run(const ExperimentSpec& spec, std::ostream& out) {
  validate(spec);
  std::string cmd = spec.subcommand;
  std::string prefix;  // compare keeps only rows whose quantity starts with this
  ExperimentSpec derived = spec;
  if (cmd == "compare") {
    const std::size_t colon = spec.pair.find(':');
    const std::string head = spec.pair.substr(0, colon);
    if (head == "h") {
      prefix = "log_h";
    } else if (head == "elogy") {
      prefix = "E_logY";
    } else if (head == "mgf") {
      derived.s = {pair_arg(spec.pair, colon)};
    } else if (head == "ldp") {
      derived.t = {pair_arg(spec.pair, colon)};
      derived.x.clear();
    } else if (head == "ed" || head == "p0") {
      derived.k = {pair_count(spec.pair, colon)};
      prefix = head == "ed" ? "E_D" : "P0";
    } else if (head == "elogo") {
      prefix = "E_logO";
    } else if (head == "psi") {
      prefix = "psi:";
    } else {
      fail(ErrorKind::Parse, "unknown pair '" + spec.pair + "'");
    }
    cmd = head == "ed" || head == "p0" ? "dnk" : head;
  }
  Context c{derived, spec.subcommand,
            cmd == "psi" ? WeightModel::uniform() : WeightModel::parse(spec.weights)};
  c.regime = spec.regime.value_or(default_regime(cmd, c.poly()));
  c.monte_carlo = cmd == "sample" || cmd == "clt" || cmd == "llt" || cmd == "dev" ||
                  (cmd == "expect" && !spec.exact);
  c.uses_zeros = cmd == "elogo" || cmd == "psi";
  c.uses_form = cmd == "mgf" || cmd == "ldp" || cmd == "elogo";
  const std::string format = spec.format.empty() ? default_format(spec.subcommand) : spec.format;

  // Build everything in memory first so a failure leaves no partial file.
  std::ostringstream buf;
  auto rows_cmd = [&](std::vector<Row> rows) {
    emit_rows(buf, c, prefix.empty() ? rows : filter(std::move(rows), prefix), format);
  };
  auto table = [&] { return h_table(c.model, derived.n.back()); };
  if (cmd == "h-table") cmd_h_table(c, format, buf);
  else if (cmd == "sample") cmd_sample(c, format, buf);
  else if (cmd == "expect") cmd_expect(c, format, buf);
  else if (cmd == "dist") cmd_dist(c, format, buf);
  else if (cmd == "clt") cmd_clt(c, format, buf);
  else if (cmd == "llt") cmd_llt(c, format, buf);
  else if (cmd == "dev") cmd_dev(c, format, buf);
  else if (cmd == "h") rows_cmd(h_rows(c, table()));
  else if (cmd == "elogy") rows_cmd(elogy_rows(c, table()));
  else if (cmd == "mgf") rows_cmd(mgf_rows(c, table()));
  else if (cmd == "dnk") rows_cmd(dnk_rows(c, table(), true, true));
  else if (cmd == "ldp") rows_cmd(ldp_rows(c, table()));
  else if (cmd == "elogo") rows_cmd(elogo_rows(c, table()));
  else if (cmd == "psi") rows_cmd(psi_rows(c));

  std::ofstream file;
  std::ostream& dst = sink(spec, out, file);
  dst << buf.str();
  dst.flush();
  if (!dst) fail(ErrorKind::Data, "write failed");
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and Monte Carlo experiments on random permutations with cycle weights.",
               "cyclemeter-cli"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  ExperimentSpec spec;
  std::string regime, form = "derived";

  auto base = [&](CLI::App* sc, const std::string& n_help) {
    sc->add_option("-n,--n", spec.n, n_help)->required()->delimiter(',');
    sc->add_option("-o,--out", spec.out, "Output path, '-' for stdout")->capture_default_str();
    sc->add_option("--format", spec.format, "csv or json (default depends on the subcommand)")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto weights = [&](CLI::App* sc) {
    sc->add_option("-w,--weights", spec.weights,
                   "uniform | ewens:<theta> | poly:<gamma> | custom:<path> | "
                   "genewens:r=<r>,theta=<t>,eps=<zero|pow:a:b|geom:a:q>[,K=<k>]")
        ->capture_default_str();
  };
  auto mc = [&](CLI::App* sc) {
    sc->add_option("--samples", spec.samples, "Monte Carlo sample count")->capture_default_str();
    sc->add_option("--seed", spec.seed, "Base seed; sample i uses stream (seed, i)")->capture_default_str();
    sc->add_option("--workers", spec.workers, "Worker threads, 0 for all cores; never changes output")
        ->capture_default_str();
  };
  auto regime_opt = [&](CLI::App* sc) {
    sc->add_option("--regime", regime, "full or truncated (cycles above b_n = n/log^2 n dropped)")
        ->check(CLI::IsMember({"full", "truncated"}));
  };
  auto form_opt = [&](CLI::App* sc) {
    sc->add_option("--form", form, "derived, or literal for the printed constants")
        ->check(CLI::IsMember({"derived", "literal"}))
        ->capture_default_str();
  };
  auto zeros_opt = [&](CLI::App* sc) {
    sc->add_option("--zeros", spec.zeros, "Number of zeta zeros to use")->capture_default_str();
    sc->add_option("--zeros-file", spec.zeros_path,
                   "Zeros table; defaults to $CYCLEMETER_ZEROS, then the bundled file");
  };
  auto stat_opt = [&](CLI::App* sc) {
    sc->add_option("--stat", spec.functional,
                   "logY | logO | delta | logY_t | logO_t | delta_t | dnk:<k> | dnkstar:<k>")
        ->capture_default_str();
  };

  auto* h = app.add_subcommand("h-table", "Normalization sequence log h_0..log h_n");
  base(h, "Largest size");
  weights(h);

  auto* sample = app.add_subcommand("sample", "Per-sample values (csv) or summary statistics (json)");
  base(sample, "Permutation size");
  weights(sample);
  mc(sample);
  stat_opt(sample);
  sample->add_option("--bins", spec.bins, "Histogram bins for json output")->capture_default_str();

  auto* expect = app.add_subcommand("expect", "Expectation of a statistic, exact or Monte Carlo");
  base(expect, "Sizes, comma separated and ascending");
  weights(expect);
  mc(expect);
  stat_opt(expect);
  expect->add_flag("--exact", spec.exact, "Use the exact series computation");

  auto* dist = app.add_subcommand("dist", "Exact distribution of a statistic by enumeration");
  base(dist, "Permutation size (at most 60)");
  weights(dist);
  stat_opt(dist);

  auto* mgf = app.add_subcommand("mgf", "E[exp(s log Y)] exact vs asymptotic");
  base(mgf, "Sizes, comma separated and ascending");
  weights(mgf);
  regime_opt(mgf);
  form_opt(mgf);
  mgf->add_option("--s", spec.s, "Exponents (default 0.5)")->delimiter(',');

  auto* dnk = app.add_subcommand("dnk", "Cycles with length divisible by k: exact vs asymptotic");
  base(dnk, "Sizes, comma separated and ascending");
  weights(dnk);
  dnk->add_option("--k", spec.k, "Divisors")->delimiter(',')->capture_default_str();

  auto* clt = app.add_subcommand("clt", "Kolmogorov-Smirnov distance of standardized log O_n");
  base(clt, "Permutation size");
  weights(clt);
  mc(clt);
  regime_opt(clt);

  auto* llt = app.add_subcommand("llt", "Binned local limit check for log O_n");
  base(llt, "Permutation size");
  weights(llt);
  mc(llt);
  regime_opt(llt);
  llt->add_option("--bins", spec.bins, "Number of bins")->capture_default_str();
  llt->add_option("--bin-width", spec.bin_width, "Bin width on the rescaled axis")->capture_default_str();

  auto* ldp = app.add_subcommand("ldp", "Scaled cumulants and rates vs the large deviation limit");
  base(ldp, "Sizes, comma separated and ascending");
  weights(ldp);
  regime_opt(ldp);
  form_opt(ldp);
  ldp->add_option("--t", spec.t, "Tilts (default -1,1)")->delimiter(',');
  ldp->add_option("--x", spec.x, "Rate function points")->delimiter(',');

  auto* dev = app.add_subcommand("dev", "Tail frequencies vs the precise deviation estimate");
  base(dev, "Permutation size");
  weights(dev);
  mc(dev);
  regime_opt(dev);
  dev->add_option("--x", spec.x, "Thresholds in units of the deviation scale (default 0.5,1)")
      ->delimiter(',');

  auto* elogo = app.add_subcommand("elogo", "E[log O_n] exact vs expansions with zeta zeros");
  base(elogo, "Sizes, comma separated and ascending");
  weights(elogo);
  regime_opt(elogo);
  form_opt(elogo);
  zeros_opt(elogo);

  auto* psi = app.add_subcommand("psi", "Chebyshev psi by sieve vs the explicit formula");
  base(psi, "Arguments x, comma separated and ascending");
  zeros_opt(psi);

  auto* compare = app.add_subcommand("compare", "n-grid sweep of one exact-vs-asymptotic pair");
  base(compare, "Sizes, comma separated and ascending");
  weights(compare);
  regime_opt(compare);
  form_opt(compare);
  zeros_opt(compare);
  compare->add_option("--pair", spec.pair,
                      "h | elogy | mgf:<s> | ldp:<t> | ed:<k> | p0:<k> | elogo | psi")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  spec.subcommand = app.get_subcommands().front()->get_name();
  if (!regime.empty()) spec.regime = regime == "truncated" ? Regime::Truncated : Regime::Full;
  spec.form = form == "literal" ? Form::Literal : Form::Derived;
  try {
    run(spec, out);
  } catch (const Error& e) {
    err << "cyclemeter-cli: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "cyclemeter-cli: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  fail(ErrorKind::Data, "no column '" + std::string(name) + "'");
}

const std::string& Table::text(std::size_t row, std::string_view col) const {
  return cells.at(row).at(column(col));
}

double Table::number(std::size_t row, std::string_view col) const {
  const std::string& s = text(row, col);
  if (s == "nan" || s == "-nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return text::parse_double(s, col);
}

Table read_table(std::istream& in) {
  Table t;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view v = text::trim(line);
    if (v.empty()) continue;
    if (v.front() == '#') {
      t.meta.emplace_back(text::trim(v.substr(1)));
      continue;
    }
    std::vector<std::string> fields;
    for (auto f : text::split(v, ',')) fields.emplace_back(text::trim(f));
    if (t.columns.empty()) {
      t.columns = std::move(fields);
    } else {
      if (fields.size() != t.columns.size())
        fail(ErrorKind::Parse, "row has " + std::to_string(fields.size()) + " fields, header has " +
                                   std::to_string(t.columns.size()));
      t.cells.push_back(std::move(fields));
    }
  }
  if (t.columns.empty()) fail(ErrorKind::Parse, "table has no header");
  return t;
}

}  // namespace cyclemeter::cli
