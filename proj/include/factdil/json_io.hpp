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

#ifndef FACTDIL_JSON_IO_HPP
#define FACTDIL_JSON_IO_HPP

/// @file
/// JSON encodings of the library's value types.
///
///   matrix        {"rows": n, "cols": m, "re": [...], "im": [...]}  (row-major)
///   BlockAlgebra  {"blocks": [{"dim": d, "weight": w}, ...]}
///   Subalgebra    {"parts": [{"factor": m, "mult": c}, ...]}
///   Channel       {"dim": n, "choi": <matrix>}  or  {"kraus": [<matrix>, ...]}
///   Presentation  {"sys_dim": n, "ancilla": ..., "D": <matrix>, "modular_over": ... | null}
///   SchurSymbol   {"dim": n, "B": <matrix>}
///   Certificate   {"weights": [...], "residual": r, "iterations": t, "verdict": "..."}
///
/// Doubles are written in shortest round-trip form, so decoding an encoded
/// matrix reproduces it bit for bit.

#include <json.hpp>
#include <string>

#include "factdil/algebra.hpp"
#include "factdil/channel.hpp"
#include "factdil/dilation.hpp"
#include "factdil/hierarchy.hpp"
#include "factdil/schur.hpp"

namespace factdil {

using json = nlohmann::json;

/// Malformed or mistyped JSON input.
class ParseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

namespace detail {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline json to_json(const Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (const auto& z : m.entries()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const json& j) {
  return detail::guarded("matrix", [&] {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (re.size() != rows * cols || im.size() != rows * cols) {
      throw ParseError("matrix: entry arrays do not match rows x cols");
    }
    std::vector<cplx> data(rows * cols);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = cplx(re[i].get<double>(), im[i].get<double>());
    return Matrix(rows, cols, std::move(data));
  });
}

inline json to_json(const BlockAlgebra& a) {
  json blocks = json::array();
  for (std::size_t b = 0; b < a.block_count(); ++b) {
    blocks.push_back({{"dim", a.block_dims()[b]}, {"weight", a.weights()[b]}});
  }
  return {{"blocks", std::move(blocks)}};
}

inline BlockAlgebra block_algebra_from_json(const json& j) {
  return detail::guarded("block algebra", [&] {
    std::vector<std::size_t> dims;
    std::vector<double> weights;
    for (const auto& b : j.at("blocks")) {
      dims.push_back(b.at("dim").get<std::size_t>());
      weights.push_back(b.at("weight").get<double>());
    }
    return BlockAlgebra(std::move(dims), std::move(weights));
  });
}

inline json to_json(const SubalgebraSpec& s) {
  json parts = json::array();
  for (const auto& p : s.parts()) parts.push_back({{"factor", p.factor}, {"mult", p.mult}});
  return {{"parts", std::move(parts)}};
}

inline SubalgebraSpec subalgebra_from_json(const json& j) {
  return detail::guarded("subalgebra spec", [&] {
    std::vector<SubalgebraPart> parts;
    for (const auto& p : j.at("parts")) {
      parts.push_back({p.at("factor").get<std::size_t>(), p.at("mult").get<std::size_t>()});
    }
    return SubalgebraSpec(std::move(parts));
  });
}

inline json to_json(const Channel& ch) { return {{"dim", ch.dim()}, {"choi", to_json(ch.choi())}}; }

/// Accepts either the Choi form or a Kraus list.
inline Channel channel_from_json(const json& j) {
  return detail::guarded("channel", [&] {
    if (j.contains("kraus")) {
      std::vector<Matrix> kraus;
      for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
      return from_kraus(kraus);
    }
    return Channel(j.at("dim").get<std::size_t>(), matrix_from_json(j.at("choi")));
  });
}

inline json to_json(const FactorizablePresentation& p) {
  return {{"sys_dim", p.sys_dim()},
          {"ancilla", to_json(p.ancilla())},
          {"D", to_json(p.unitary())},
          {"modular_over", p.modular_over() ? to_json(*p.modular_over()) : json(nullptr)}};
}

/// Decodes without validating; callers choose between validate() and create().
inline FactorizablePresentation presentation_from_json(const json& j) {
  return detail::guarded("presentation", [&] {
    std::optional<SubalgebraSpec> mod;
    if (j.contains("modular_over") && !j.at("modular_over").is_null()) {
      mod = subalgebra_from_json(j.at("modular_over"));
    }
    return FactorizablePresentation::unchecked(j.at("sys_dim").get<std::size_t>(),
                                               block_algebra_from_json(j.at("ancilla")),
                                               matrix_from_json(j.at("D")), std::move(mod));
  });
}

inline json to_json(const SchurSymbol& s) { return {{"dim", s.dim}, {"B", to_json(s.b)}}; }

inline SchurSymbol schur_symbol_from_json(const json& j) {
  return detail::guarded("schur symbol", [&] {
    SchurSymbol s{j.at("dim").get<std::size_t>(), matrix_from_json(j.at("B"))};
    if (s.b.rows() != s.dim || s.b.cols() != s.dim) throw ParseError("schur symbol: B must be dim x dim");
    return s;
  });
}

inline json to_json(const OperatorSymbol& s) { return {{"dim", s.dim}, {"symbol", to_json(s.matrix)}}; }

inline json to_json(const MembershipCertificate& c) {
  return {{"weights", c.weights},
          {"residual", c.residual},
          {"iterations", c.iterations},
          {"verdict", to_string(c.verdict)}};
}

inline json to_json(const UnitaryFamily& f) {
  json us = json::array();
  for (const auto& u : f.unitaries()) us.push_back(to_json(u));
  return {{"spec", to_json(f.spec())}, {"unitaries", std::move(us)}};
}

inline UnitaryFamily unitary_family_from_json(const json& j) {
  return detail::guarded("unitary family", [&] {
    std::vector<Matrix> us;
    for (const auto& u : j.at("unitaries")) us.push_back(matrix_from_json(u));
    return UnitaryFamily(subalgebra_from_json(j.at("spec")), std::move(us));
  });
}

}  // namespace factdil

#endif  // FACTDIL_JSON_IO_HPP
