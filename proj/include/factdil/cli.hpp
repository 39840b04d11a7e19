// Copyright 2026 The factdil Authors
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

#ifndef FACTDIL_CLI_HPP
#define FACTDIL_CLI_HPP

/// @file
/// Command implementations behind the `factdil` tool. Each command takes
/// parsed JSON and returns the document to print plus an exit code:
/// 0 when every check passes or a verdict was delivered, 1 when a
/// mathematical invariant failed, 2 for bad input.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "factdil/generate.hpp"
#include "factdil/json_io.hpp"

namespace factdil::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitInput = 2;

inline constexpr std::size_t kDimCap = 16;

struct Options {
  std::uint64_t seed = 0;
  Tolerance tol{};
  std::size_t trials = 100;
};

struct Outcome {
  json document;
  int exit_code = kExitOk;
};

class Report {
 public:
  Report(std::string command, const Options& opt) : command_(std::move(command)), seed_(opt.seed) {}

  void input(const std::string& key, json value) { inputs_[key] = std::move(value); }

  /// pass iff measured <= tolerance. Non-finite measurements fail.
  void check(const std::string& name, double measured, double tolerance) {
    const bool pass = std::isfinite(measured) && measured <= tolerance;
    checks_.push_back({{"name", name},
                       {"pass", pass},
                       {"measured", std::isfinite(measured) ? json(measured) : json("inf")},
                       {"tolerance", tolerance}});
  }

  void flag(const std::string& name, bool ok) { check(name, ok ? 0.0 : 1.0, 0.0); }

  void result(json r) { result_ = std::move(r); }

  bool all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const json& c) { return c.at("pass").get<bool>(); });
  }

  Outcome finish() const {
    json checks = checks_;
    std::stable_sort(checks.begin(), checks.end(),
                     [](const json& a, const json& b) { return a.at("name") < b.at("name"); });
    json doc = {{"command", command_}, {"seed", seed_}, {"inputs", inputs_}, {"checks", std::move(checks)}};
    if (!result_.is_null()) doc["result"] = result_;
    return {std::move(doc), all_pass() ? kExitOk : kExitInvariant};
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  json inputs_ = json::object();
  json checks_ = json::array();
  json result_;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace detail {

inline void require_cap(const char* what, std::size_t v) {
  if (v == 0 || v > kDimCap) {
    throw PreconditionError(std::string(what) + " must lie in [1, " + std::to_string(kDimCap) + "]");
  }
}

inline std::size_t sum(const std::vector<std::size_t>& v) {
  std::size_t s = 0;
  for (auto x : v) s += x;
  return s;
}

/// Block dims from --blocks, defaulting to one block of size `fallback`.
inline std::vector<std::size_t> dims_or(const std::string& blocks, std::size_t fallback, const char* what) {
  auto dims = blocks.empty() ? std::vector<std::size_t>{fallback} : parse_block_spec(blocks);
  if (!blocks.empty() && fallback != 0 && sum(dims) != fallback) {
    throw PreconditionError(std::string("block spec does not sum to ") + what);
  }
  return dims;
}

inline std::string kind_of(const json& doc) { return doc.value("kind", std::string{}); }

inline FactorizablePresentation presentation_input(const json& doc) {
  if (!doc.is_object() || !doc.contains("D")) throw ParseError("expected a presentation");
  return presentation_from_json(doc);
}

inline std::vector<Matrix> matrices(const json& arr) {
  std::vector<Matrix> out;
  factdil::detail::guarded("matrix list", [&] {
    for (const auto& m : arr) out.push_back(matrix_from_json(m));
    return 0;
  });
  return out;
}

/// Validation-stage checks shared by several suites. Returns the channel
/// when the presentation is valid.
inline std::optional<Channel> presentation_checks(Report& rep, const FactorizablePresentation& p,
                                                  const Options& opt) {
  const Matrix& d = p.unitary();
  const double unit_defect = (d.adjoint() * d - Matrix::identity(d.rows())).max_abs();
  rep.check("unitarity", unit_defect, opt.tol.abs_eps);
  if (unit_defect > opt.tol.abs_eps) return std::nullopt;

  const auto viol = first_returns_violation(p, opt.tol);
  rep.check("returns_to_ancilla", viol ? viol->defect : 0.0, opt.tol.abs_eps);
  rep.flag("returns_equivalence", returns_to_ancilla(p, opt.tol) == returns_equivalence_check(p, opt.tol));

  double tp = 0.0;
  for (std::size_t e = 0; e < p.sys_dim(); ++e) tp = std::max(tp, std::abs(trace_preservation_value(p, e) - 1.0));
  rep.check("trace_preservation", tp, opt.tol.abs_eps);

  const auto check = p.validate(opt.tol, true);
  if (p.modular_over() && (check || check.stage == PresentationCheck::Stage::modularity)) {
    rep.flag("modularity", static_cast<bool>(check));
  }
  if (!check) return std::nullopt;
  return phi_of(p, opt.tol);
}

}  // namespace detail

/// Seeded instance generation. `k` and `blocks` describe the ancilla for
/// presentations and Schur tuples; for unitary families `blocks` splits
/// the system dimension n and `k` is the family size.
inline json cmd_generate(const std::string& kind, std::size_t n, std::size_t k, const std::string& blocks,
                         const Options& opt) {
  detail::require_cap("n", n);
  Rng rng(opt.seed);
  if (kind == "random_presentation" || kind == "random_schur") {
    const auto dims = detail::dims_or(blocks, k, "k");
    detail::require_cap("k", detail::sum(dims));
    const BlockAlgebra anc = random_block_algebra(rng, dims);
    if (kind == "random_presentation") {
      json j = to_json(random_presentation(rng, n, anc, {}, opt.tol));
      j["kind"] = "presentation";
      return j;
    }
    const auto us = random_unitaries_in(rng, anc, n);
    json j = to_json(symbol_from_unitaries(anc, us, opt.tol));
    j["kind"] = "schur";
    j["ancilla"] = to_json(anc);
    json arr = json::array();
    for (const auto& u : us) arr.push_back(to_json(u));
    j["unitaries"] = std::move(arr);
    return j;
  }
  if (kind == "random_unitary_family") {
    detail::require_cap("k", k);
    std::vector<SubalgebraPart> parts;
    for (auto dim : detail::dims_or(blocks, n, "n")) parts.push_back({dim, 1});
    const SubalgebraSpec spec(std::move(parts));
    std::vector<Matrix> us;
    for (std::size_t i = 0; i < k; ++i) us.push_back(random_unitary_in(rng, spec));
    const UnitaryFamily fam(spec, std::move(us), opt.tol);
    const auto w = random_simplex_point(rng, k);
    json j = to_json(fam);
    j["kind"] = "unitary_family";
    j["target"] = to_json(mixture(fam, w));
    j["planted_weights"] = w;
    return j;
  }
  throw PreconditionError("unknown kind: " + kind);
}

inline Outcome cmd_verify(const json& doc, const std::string& suite, const Options& opt) {
  Report rep("verify", opt);
  rep.input("suite", suite);
  rep.input("kind", detail::kind_of(doc));
  Rng rng(opt.seed);

  if (suite == "presentation" || suite == "symbol" || suite.rfind("power:", 0) == 0) {
    const auto p = detail::presentation_input(doc);
    rep.input("sys_dim", p.sys_dim());
    rep.input("ancilla_dim", p.ancilla_dim());
    std::size_t m = 0;
    if (suite != "presentation" && suite != "symbol") {
      try {
        std::size_t used = 0;
        const std::string digits = suite.substr(6);
        m = std::stoul(digits, &used);
        if (used != digits.size()) throw std::invalid_argument(digits);
      } catch (const std::logic_error&) {
        throw PreconditionError("malformed suite: " + suite);
      }
      std::size_t size = p.sys_dim();
      for (std::size_t i = 0; i < m; ++i) {
        size *= p.ancilla_dim();
        if (size > kPowerSizeCap) throw PreconditionError("power: size cap exceeded");
      }
      rep.input("m", m);
    }
    const auto phi = detail::presentation_checks(rep, p, opt);
    if (!phi) {
      rep.flag("phi_defined", false);
      return rep.finish();
    }
    if (suite == "presentation") {
      rep.check("phi_cp", std::max(0.0, -min_eigenvalue(phi->choi(), opt.tol)), opt.tol.abs_eps);
      rep.check("phi_tp", tp_defect(*phi), opt.tol.abs_eps);
      rep.check("phi_unital", unital_defect(*phi), opt.tol.abs_eps);
      if (p.modular_over()) {
        rep.check("phi_bimodular", bimodular_defect(*phi, commutant_generators(*p.modular_over())), opt.tol.abs_eps);
      }
      double worst = 0.0;
      const std::size_t n = p.sys_dim();
      for (std::size_t t = 0; t < opt.trials; ++t) {
        const Matrix x = ginibre(rng, n, n);
        worst = std::max(worst, std::abs(apply(*phi, x).trace() - x.trace()) / x.frobenius_norm());
      }
      rep.check("tp_random_inputs", worst, opt.tol.abs_eps);
    } else if (suite == "symbol") {
      rep.check("symbol_agreement", distance(symbol_formula(p, opt.tol).matrix, symbol_of(*phi).matrix),
                opt.tol.abs_eps);
    } else {
      Channel acc = Channel::identity(p.sys_dim());
      for (std::size_t i = 0; i < m; ++i) acc = compose(*phi, acc);
      rep.check("power_vs_composition", choi_distance(power_channel(p, m, opt.tol), acc), opt.tol.abs_eps);
    }
    return rep.finish();
  }

  if (suite == "schur") {
    if (doc.contains("unitaries")) {
      const auto anc = block_algebra_from_json(doc.at("ancilla"));
      const auto us = detail::matrices(doc.at("unitaries"));
      const auto given = schur_symbol_from_json(doc);
      const auto s = symbol_from_unitaries(anc, us, opt.tol);
      rep.input("dim", s.dim);
      rep.check("symbol_recomputed", distance(given.b, s.b), opt.tol.abs_eps);
      rep.check("symbol_psd", std::max(0.0, -min_eigenvalue(s.b, opt.tol)), opt.tol.abs_eps);
      double diag = 0.0;
      for (std::size_t i = 0; i < s.dim; ++i) diag = std::max(diag, std::abs(s.b(i, i) - 1.0));
      rep.check("symbol_unit_diagonal", diag, opt.tol.abs_eps);
      rep.check("diagonal_presentation_match",
                choi_distance(schur_channel(s), phi_of(diagonal_presentation(anc, us, opt.tol), opt.tol)),
                opt.tol.abs_eps);
      return rep.finish();
    }
    const auto p = detail::presentation_input(doc);
    const auto phi = detail::presentation_checks(rep, p, opt);
    if (!phi) {
      rep.flag("phi_defined", false);
      return rep.finish();
    }
    rep.flag("schur_pattern", recognize_schur(*phi, opt.tol).has_value());
    return rep.finish();
  }

  if (suite == "membership") {
    const auto fam = unitary_family_from_json(doc);
    const auto target = factdil::detail::guarded("target", [&] { return channel_from_json(doc.at("target")); });
    rep.input("dim", target.dim());
    rep.input("family_size", fam.size());
    const auto cert = conv_membership(target, fam, opt.tol);
    const double recomputed = choi_distance(target, mixture(fam, cert.weights));
    rep.check("certificate_residual", std::abs(recomputed - cert.residual), 1e-12);
    double neg = 0.0;
    double total = 0.0;
    for (double w : cert.weights) {
      neg = std::max(neg, -w);
      total += w;
    }
    rep.check("weights_on_simplex", std::max(neg, std::abs(total - 1.0)), 1e-12);
    if (cert.verdict == Verdict::member) {
      rep.check("mixture_reconstructs", recomputed, opt.tol.abs_eps);
      rep.check("mixture_bimodular", bimodular_defect(mixture(fam, cert.weights), commutant_generators(fam.spec())),
                opt.tol.abs_eps);
    }
    rep.result(to_json(cert));
    return rep.finish();
  }
  throw PreconditionError("unknown suite: " + suite);
}

inline Outcome cmd_symbol(const json& doc, const Options& opt) {
  Report rep("symbol", opt);
  const auto p = detail::presentation_input(doc);
  rep.input("sys_dim", p.sys_dim());
  const auto check = p.validate(opt.tol);
  rep.flag("presentation_valid", static_cast<bool>(check));
  if (check) rep.result(to_json(symbol_formula(p, opt.tol)));
  return rep.finish();
}

inline Outcome cmd_power(const json& doc, std::size_t m, const Options& opt) {
  Report rep("power", opt);
  const auto p = detail::presentation_input(doc);
  rep.input("sys_dim", p.sys_dim());
  rep.input("m", m);
  const auto check = p.validate(opt.tol);
  rep.flag("presentation_valid", static_cast<bool>(check));
  if (check) rep.result(to_json(power_channel(p, m, opt.tol)));
  return rep.finish();
}

/// Schur symbol and channel of a unitary tuple, or recognition of the
/// Schur pattern in the channel of a presentation.
inline Outcome cmd_schur(const json& doc, const Options& opt) {
  Report rep("schur", opt);
  if (doc.contains("unitaries")) {
    const auto anc = block_algebra_from_json(doc.at("ancilla"));
    const auto s = symbol_from_unitaries(anc, detail::matrices(doc.at("unitaries")), opt.tol);
    rep.input("dim", s.dim);
    rep.result({{"symbol", to_json(s)}, {"channel", to_json(schur_channel(s))}});
    return rep.finish();
  }
  const auto p = detail::presentation_input(doc);
  rep.input("sys_dim", p.sys_dim());
  const auto check = p.validate(opt.tol);
  rep.flag("presentation_valid", static_cast<bool>(check));
  if (check) {
    const auto s = recognize_schur(phi_of(p, opt.tol), opt.tol);
    rep.result({{"schur", s ? to_json(*s) : json(nullptr)}});
  }
  return rep.finish();
}

inline Outcome cmd_membership(const json& doc, const Options& opt) {
  Report rep("membership", opt);
  const auto fam = unitary_family_from_json(doc);
  const auto target = factdil::detail::guarded("target", [&] { return channel_from_json(doc.at("target")); });
  rep.input("dim", target.dim());
  rep.input("family_size", fam.size());
  rep.result(to_json(conv_membership(target, fam, opt.tol)));
  return rep.finish();
}

/// Input: {"sequence": [presentation, ...]}.
inline Outcome cmd_monitor(const json& doc, const Options& opt) {
  Report rep("monitor", opt);
  std::vector<FactorizablePresentation> seq;
  factdil::detail::guarded("sequence", [&] {
    for (const auto& p : doc.at("sequence")) seq.push_back(presentation_from_json(p));
    return 0;
  });
  rep.input("length", seq.size());
  std::size_t invalid = 0;
  for (const auto& p : seq) invalid += !p.validate(opt.tol);
  rep.check("presentations_valid", static_cast<double>(invalid), 0.0);
  if (invalid == 0) {
    const auto r = convergence_monitor(seq, opt.tol);
    rep.result({{"distances", r.distances}, {"cauchy", r.cauchy}});
  }
  return rep.finish();
}

}  // namespace factdil::cli

#endif  // FACTDIL_CLI_HPP
