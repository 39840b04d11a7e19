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

#ifndef FACTDIL_GENERATE_HPP
#define FACTDIL_GENERATE_HPP

/// @file
/// Seeded random instances: presentations that return to their ancilla by
/// construction, unitary families inside a block subalgebra, and Schur
/// symbols from unitary tuples.

#include <charconv>
#include <optional>
#include <string_view>
#include <vector>

#include "factdil/algebra.hpp"
#include "factdil/dilation.hpp"
#include "factdil/random.hpp"
#include "factdil/schur.hpp"

namespace factdil {

/// Parses "2,1,1" into block dimensions.
inline std::vector<std::size_t> parse_block_spec(std::string_view text) {
  std::vector<std::size_t> dims;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    std::size_t value = 0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size() || value == 0) {
      throw PreconditionError("malformed block spec: '" + std::string(token) + "'");
    }
    dims.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (text.empty()) throw PreconditionError("malformed block spec: trailing comma");
  }
  if (dims.empty()) throw PreconditionError("malformed block spec: empty");
  return dims;
}

/// Block dimensions with random positive weights.
inline BlockAlgebra random_block_algebra(Rng& rng, std::vector<std::size_t> dims) {
  auto w = random_simplex_point(rng, dims.size());
  return BlockAlgebra(std::move(dims), std::move(w));
}

/// Orthogonal projection of an (n k) x (n k) matrix onto D ⊗ N, where D is
/// `system` (all of M_n when absent) and N the ancilla.
inline Matrix project_onto_tensor_algebra(const Matrix& x, std::size_t n, const BlockAlgebra& anc,
                                          const std::optional<SubalgebraSpec>& system) {
  const std::size_t k = anc.ambient_dim();
  Matrix r(n * k, n * k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      r.set_block(i * k, j * k, conditional_expectation(anc, x.block(i * k, j * k, k, k)));
  if (!system) return r;
  Matrix out(n * k, n * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      Matrix s(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s(i, j) = r(i * k + a, j * k + b);
      const Matrix e = conditional_expectation(*system, s);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i * k + a, j * k + b) = e(i, j);
    }
  return out;
}

struct PresentationOptions {
  /// Left-multiply by 1 ⊗ v with v Haar in M_k. The slices then leave N
  /// while their products d_ij* d_kl stay in it.
  bool twist = true;
  std::optional<SubalgebraSpec> modular_over;
  double spread = 3.14159265358979323846;  // scale of the Hermitian generator
};

/// D = (1 ⊗ v) exp(i A) with A Hermitian in D ⊗ N. Returns to N exactly,
/// so no rejection sampling is needed.
inline FactorizablePresentation random_presentation(Rng& rng, std::size_t n, const BlockAlgebra& anc,
                                                    const PresentationOptions& opt = {},
                                                    const Tolerance& tol = {}) {
  const std::size_t k = anc.ambient_dim();
  const Matrix h = random_hermitian(rng, n * k) * cplx(opt.spread / std::sqrt(static_cast<double>(n * k)));
  const Matrix a = project_onto_tensor_algebra(h, n, anc, opt.modular_over);
  Matrix d = exp_i_hermitian(a, tol);
  if (opt.twist) d = kron(Matrix::identity(n), haar_unitary(rng, k)) * d;
  return FactorizablePresentation::create(n, anc, std::move(d), opt.modular_over, tol);
}

/// A presentation whose D is multiplied on the right by 1 ⊗ v, v Haar in
/// M_k. Unitary, but for a proper ancilla the products d_ij* d_kl leave N.
inline FactorizablePresentation corrupt_presentation(Rng& rng, const FactorizablePresentation& p) {
  const Matrix v = haar_unitary(rng, p.ancilla_dim());
  return FactorizablePresentation::unchecked(
      p.sys_dim(), p.ancilla(), p.unitary() * kron(Matrix::identity(p.sys_dim()), v), p.modular_over());
}

inline std::vector<Matrix> random_unitaries_in(Rng& rng, const BlockAlgebra& alg, std::size_t count) {
  std::vector<Matrix> us;
  for (std::size_t i = 0; i < count; ++i) us.push_back(random_unitary_in(rng, alg));
  return us;
}

}  // namespace factdil

#endif  // FACTDIL_GENERATE_HPP
