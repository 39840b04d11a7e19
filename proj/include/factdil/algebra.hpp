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

#ifndef FACTDIL_ALGEBRA_HPP
#define FACTDIL_ALGEBRA_HPP

/// @file
/// Finite tracial algebras in block presentation.
///
/// `BlockAlgebra` is an ancilla N = M_{n_1} ⊕ ... ⊕ M_{n_r} sitting
/// block-diagonally in M_k with the state tau = sum_b alpha_b tr_b / n_b.
/// `SubalgebraSpec` is a system-side algebra D = ⊕_p (M_{m_p} ⊗ I_{c_p})
/// in M_n; its commutant is ⊕_p (I_{m_p} ⊗ M_{c_p}) in the same basis.

#include <cmath>
#include <numeric>
#include <vector>

#include "factdil/matcore.hpp"
#include "factdil/random.hpp"

namespace factdil {

class BlockAlgebra {
 public:
  BlockAlgebra(std::vector<std::size_t> block_dims, std::vector<double> weights)
      : dims_(std::move(block_dims)), weights_(std::move(weights)) {
    if (dims_.empty()) throw PreconditionError("block algebra needs a block");
    if (dims_.size() != weights_.size()) {
      throw PreconditionError("one weight per block required");
    }
    double total = 0.0;
    for (std::size_t b = 0; b < dims_.size(); ++b) {
      if (dims_[b] == 0) throw PreconditionError("block dimensions must be >= 1");
      if (!(weights_[b] > 0.0) || !std::isfinite(weights_[b])) {
        throw PreconditionError("block weights must be positive");
      }
      offsets_.push_back(ambient_);
      ambient_ += dims_[b];
      total += weights_[b];
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw PreconditionError("block weights must sum to one");
    }
  }

  /// M_k with its normalised trace.
  static BlockAlgebra full(std::size_t k) { return BlockAlgebra({k}, {1.0}); }

  /// C^k as the diagonal of M_k with the uniform state.
  static BlockAlgebra diagonal(std::size_t k) {
    return BlockAlgebra(std::vector<std::size_t>(k, 1),
                        std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  /// Weights proportional to block dimension, i.e. the normalised trace of
  /// M_k restricted to the algebra.
  static BlockAlgebra with_dimension_weights(std::vector<std::size_t> dims) {
    const double k = static_cast<double>(std::accumulate(dims.begin(), dims.end(), std::size_t{0}));
    std::vector<double> w;
    for (auto d : dims) w.push_back(static_cast<double>(d) / k);
    return BlockAlgebra(std::move(dims), std::move(w));
  }

  const std::vector<std::size_t>& block_dims() const noexcept { return dims_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t block_count() const noexcept { return dims_.size(); }
  std::size_t offset(std::size_t b) const { return offsets_.at(b); }

  bool is_abelian() const {
    return std::all_of(dims_.begin(), dims_.end(), [](auto d) { return d == 1; });
  }

  /// Per-basis-vector weights: alpha_b / n_b on each index of block b.
  std::vector<double> trace_profile() const {
    std::vector<double> w(ambient_);
    for (std::size_t b = 0; b < dims_.size(); ++b)
      for (std::size_t i = 0; i < dims_[b]; ++i)
        w[offsets_[b] + i] = weights_[b] / static_cast<double>(dims_[b]);
    return w;
  }

  /// Index of the block containing basis index a.
  std::size_t block_of(std::size_t a) const {
    for (std::size_t b = dims_.size(); b-- > 0;)
      if (a >= offsets_[b]) return b;
    throw PreconditionError("basis index out of range");
  }

  friend bool operator==(const BlockAlgebra&, const BlockAlgebra&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> weights_;
  std::vector<std::size_t> offsets_;
  std::size_t ambient_ = 0;
};

/// Block-diagonal pinching onto the algebra.
inline Matrix conditional_expectation(const BlockAlgebra& alg, const Matrix& x) {
  const std::size_t k = alg.ambient_dim();
  if (x.rows() != k || x.cols() != k) {
    throw PreconditionError("conditional_expectation: dimension mismatch");
  }
  Matrix r(k, k);
  for (std::size_t b = 0; b < alg.block_count(); ++b) {
    const std::size_t o = alg.offset(b);
    const std::size_t d = alg.block_dims()[b];
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) r(o + i, o + j) = x(o + i, o + j);
  }
  return r;
}

inline double algebra_defect(const BlockAlgebra& alg, const Matrix& x) {
  return distance(x, conditional_expectation(alg, x));
}

inline bool contains(const BlockAlgebra& alg, const Matrix& x, const Tolerance& tol = {}) {
  return algebra_defect(alg, x) <= tol.abs_eps;
}

/// The tracial state of the algebra.
inline cplx trace(const BlockAlgebra& alg, const Matrix& x, const Tolerance& tol = {}) {
  if (!contains(alg, x, tol)) {
    throw PreconditionError("trace: operand lies outside the algebra");
  }
  const auto w = alg.trace_profile();
  cplx s = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) s += w[a] * x(a, a);
  return s;
}

/// Haar unitary inside the algebra, drawn block by block.
inline Matrix random_unitary_in(Rng& rng, const BlockAlgebra& alg) {
  Matrix u(alg.ambient_dim(), alg.ambient_dim());
  for (std::size_t b = 0; b < alg.block_count(); ++b) {
    u.set_block(alg.offset(b), alg.offset(b), haar_unitary(rng, alg.block_dims()[b]));
  }
  return u;
}

// ---------------------------------------------------------------------------

struct SubalgebraPart {
  std::size_t factor = 1;
  std::size_t mult = 1;
  friend bool operator==(const SubalgebraPart&, const SubalgebraPart&) = default;
};

class SubalgebraSpec {
 public:
  explicit SubalgebraSpec(std::vector<SubalgebraPart> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw PreconditionError("subalgebra spec needs a part");
    for (const auto& p : parts_) {
      if (p.factor == 0 || p.mult == 0) {
        throw PreconditionError("malformed subalgebra spec: zero factor or multiplicity");
      }
      offsets_.push_back(ambient_);
      ambient_ += p.factor * p.mult;
    }
  }

  static SubalgebraSpec full(std::size_t n) { return SubalgebraSpec({{n, 1}}); }
  static SubalgebraSpec scalars(std::size_t n) { return SubalgebraSpec({{1, n}}); }
  static SubalgebraSpec diagonal_masa(std::size_t n) {
    return SubalgebraSpec(std::vector<SubalgebraPart>(n, {1, 1}));
  }

  const std::vector<SubalgebraPart>& parts() const noexcept { return parts_; }
  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t offset(std::size_t p) const { return offsets_.at(p); }

  /// Linear dimension of the algebra, sum of factor^2.
  std::size_t algebra_dim() const {
    std::size_t d = 0;
    for (const auto& p : parts_) d += p.factor * p.factor;
    return d;
  }

  friend bool operator==(const SubalgebraSpec& a, const SubalgebraSpec& b) {
    return a.parts_ == b.parts_;
  }

 private:
  std::vector<SubalgebraPart> parts_;
  std::vector<std::size_t> offsets_;
  std::size_t ambient_ = 0;
};

/// Structural commutant: factor and multiplicity swap in every part.
inline SubalgebraSpec commutant(const SubalgebraSpec& spec) {
  std::vector<SubalgebraPart> parts;
  for (const auto& p : spec.parts()) parts.push_back({p.mult, p.factor});
  return SubalgebraSpec(std::move(parts));
}

/// Matrix units of each factor, tensored with the multiplicity identity.
inline std::vector<Matrix> algebra_generators(const SubalgebraSpec& spec) {
  const std::size_t n = spec.ambient_dim();
  std::vector<Matrix> gens;
  for (std::size_t p = 0; p < spec.parts().size(); ++p) {
    const auto [m, c] = spec.parts()[p];
    const std::size_t o = spec.offset(p);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t s = 0; s < m; ++s) {
        Matrix g(n, n);
        g.set_block(o, o, kron(matrix_unit(m, r, s), Matrix::identity(c)));
        gens.push_back(std::move(g));
      }
  }
  return gens;
}

/// Identity on each factor tensored with the multiplicity matrix units; spans
/// the commutant of the spec's algebra in the same basis.
inline std::vector<Matrix> commutant_generators(const SubalgebraSpec& spec) {
  const std::size_t n = spec.ambient_dim();
  std::vector<Matrix> gens;
  for (std::size_t p = 0; p < spec.parts().size(); ++p) {
    const auto [m, c] = spec.parts()[p];
    const std::size_t o = spec.offset(p);
    for (std::size_t r = 0; r < c; ++r)
      for (std::size_t s = 0; s < c; ++s) {
        Matrix g(n, n);
        g.set_block(o, o, kron(Matrix::identity(m), matrix_unit(c, r, s)));
        gens.push_back(std::move(g));
      }
  }
  return gens;
}

/// Trace-preserving conditional expectation of M_n onto the spec's algebra.
inline Matrix conditional_expectation(const SubalgebraSpec& spec, const Matrix& x) {
  const std::size_t n = spec.ambient_dim();
  if (x.rows() != n || x.cols() != n) {
    throw PreconditionError("conditional_expectation: dimension mismatch");
  }
  Matrix r(n, n);
  for (std::size_t p = 0; p < spec.parts().size(); ++p) {
    const auto [m, c] = spec.parts()[p];
    const std::size_t o = spec.offset(p);
    const Matrix reduced =
        partial_trace_second(x.block(o, o, m * c, m * c), m, c) * cplx(1.0 / static_cast<double>(c));
    r.set_block(o, o, kron(reduced, Matrix::identity(c)));
  }
  return r;
}

inline bool contains(const SubalgebraSpec& spec, const Matrix& x, const Tolerance& tol = {}) {
  return distance(x, conditional_expectation(spec, x)) <= tol.abs_eps;
}

/// Haar unitary inside D = ⊕ (M_m ⊗ I_c).
inline Matrix random_unitary_in(Rng& rng, const SubalgebraSpec& spec) {
  const std::size_t n = spec.ambient_dim();
  Matrix u(n, n);
  for (std::size_t p = 0; p < spec.parts().size(); ++p) {
    const auto [m, c] = spec.parts()[p];
    u.set_block(spec.offset(p), spec.offset(p), kron(haar_unitary(rng, m), Matrix::identity(c)));
  }
  return u;
}

/// Dimension of {X : X A = A X for every generator}, counted as the
/// near-null space of sum_g M_g* M_g with M_g the linearisation of
/// X -> X A_g - A_g X. Cutoff: eig_eps * (largest eigenvalue + 1).
inline std::size_t numeric_commutant_dim(std::span<const Matrix> generators,
                                         std::size_t n, const Tolerance& tol = {}) {
  if (generators.empty()) return n * n;
  const std::size_t nn = n * n;
  Matrix gram(nn, nn);
  const Matrix id = Matrix::identity(n);
  for (const auto& a : generators) {
    if (a.rows() != n || a.cols() != n) {
      throw PreconditionError("numeric_commutant_dim: generator dimension mismatch");
    }
    // Row-major vec: vec(X A) = (I ⊗ A^T) vec X, vec(A X) = (A ⊗ I) vec X.
    const Matrix lin = kron(id, a.transpose()) - kron(a, id);
    gram += lin.adjoint() * lin;
  }
  const auto es = hermitian_eig(gram, tol);
  const double cutoff = tol.eig_eps * (es.values.back() + 1.0);
  std::size_t null_dim = 0;
  for (double v : es.values)
    if (v < cutoff) ++null_dim;
  return null_dim;
}

inline std::size_t numeric_commutant_dim(std::span<const Matrix> generators,
                                         const Tolerance& tol = {}) {
  if (generators.empty()) {
    throw PreconditionError("numeric_commutant_dim: ambient dimension unknown for empty list");
  }
  return numeric_commutant_dim(generators, generators.front().rows(), tol);
}

}  // namespace factdil

#endif  // FACTDIL_ALGEBRA_HPP
