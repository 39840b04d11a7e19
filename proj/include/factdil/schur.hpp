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

#ifndef FACTDIL_SCHUR_HPP
#define FACTDIL_SCHUR_HPP

/// @file
/// Discrete Schur multipliers e_ij -> B(i, j) e_ij. Factorisable ones have
/// B(i, j) = tau(d_i* d_j) for unitaries d_i in a tracial algebra.

#include <optional>
#include <span>
#include <vector>

#include "factdil/algebra.hpp"
#include "factdil/channel.hpp"
#include "factdil/dilation.hpp"

namespace factdil {

struct SchurSymbol {
  std::size_t dim = 0;
  Matrix b;
};

inline SchurSymbol symbol_from_unitaries(const BlockAlgebra& alg, std::span<const Matrix> d,
                                         const Tolerance& tol = {}) {
  const std::size_t n = d.size();
  if (n == 0) throw PreconditionError("symbol_from_unitaries: empty tuple");
  for (const auto& u : d) {
    if (u.rows() != alg.ambient_dim() || u.cols() != alg.ambient_dim()) {
      throw PreconditionError("symbol_from_unitaries: dimension mismatch");
    }
    if (!is_unitary(u, tol)) throw PreconditionError("symbol_from_unitaries: non-unitary entry");
    if (!contains(alg, u, tol)) throw PreconditionError("symbol_from_unitaries: entry outside the algebra");
  }
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = trace(alg, d[i].adjoint() * d[j], tol);
  return {n, std::move(b)};
}

inline Channel schur_channel(const SchurSymbol& s) {
  const std::size_t n = s.dim;
  if (s.b.rows() != n || s.b.cols() != n) throw PreconditionError("schur symbol must be n x n");
  Matrix c(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i * n + i, j * n + j) = s.b(i, j);
  return Channel(n, std::move(c));
}

/// B when Phi(e_ij) = B(i, j) e_ij up to `tol` for every matrix unit;
/// empty otherwise.
inline std::optional<SchurSymbol> recognize_schur(const Channel& ch, const Tolerance& tol = {}) {
  const std::size_t n = ch.dim();
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix img = ch.image_of_unit(i, j);
      b(i, j) = img(i, j);
      img(i, j) = 0.0;
      if (img.max_abs() >= tol.abs_eps) return std::nullopt;
    }
  return SchurSymbol{n, std::move(b)};
}

/// D = sum_i e_ii ⊗ d_i over `alg`.
inline FactorizablePresentation diagonal_presentation(const BlockAlgebra& alg,
                                                      std::span<const Matrix> d,
                                                      const Tolerance& tol = {}) {
  const std::size_t n = d.size();
  const std::size_t k = alg.ambient_dim();
  Matrix big(n * k, n * k);
  for (std::size_t i = 0; i < n; ++i) big.set_block(i * k, i * k, d[i]);
  return FactorizablePresentation::create(n, alg, std::move(big),
                                          SubalgebraSpec::diagonal_masa(n), tol);
}

}  // namespace factdil

#endif  // FACTDIL_SCHUR_HPP
