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

#ifndef FACTDIL_CHANNEL_HPP
#define FACTDIL_CHANNEL_HPP

/// @file
/// Linear maps on M_n stored as Choi matrices C = sum_ij e_ij ⊗ Phi(e_ij)
/// (input factor first). With this convention trace preservation reads
/// Tr_2 C = I and unitality reads Tr_1 C = I.

#include <optional>
#include <span>
#include <vector>

#include "factdil/algebra.hpp"
#include "factdil/matcore.hpp"

namespace factdil {

struct ChannelFlags {
  bool cp = false;
  bool tp = false;
  bool unital = false;
};

class Channel {
 public:
  Channel(std::size_t dim, Matrix choi, std::optional<ChannelFlags> flags = std::nullopt)
      : dim_(dim), choi_(std::move(choi)), flags_(flags) {
    if (dim_ == 0) throw PreconditionError("channel dimension must be positive");
    if (choi_.rows() != dim_ * dim_ || choi_.cols() != dim_ * dim_) {
      throw PreconditionError("Choi matrix must be n^2 x n^2");
    }
  }

  /// Builds the Choi matrix from the images of the matrix units.
  template <class F>
  static Channel from_map(std::size_t n, F&& phi) {
    Matrix c(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) c.set_block(i * n, j * n, phi(matrix_unit(n, i, j)));
    return Channel(n, std::move(c));
  }

  static Channel identity(std::size_t n) {
    return from_map(n, [](const Matrix& x) { return x; });
  }

  /// x -> u* x u
  static Channel conjugation(const Matrix& u) {
    if (!u.square()) throw PreconditionError("conjugation by a non-square matrix");
    const Matrix ua = u.adjoint();
    Channel ch = from_map(u.rows(), [&](const Matrix& x) { return ua * x * u; });
    return ch;
  }

  /// Positive but not completely positive.
  static Channel transpose_map(std::size_t n) {
    return from_map(n, [](const Matrix& x) { return x.transpose(); });
  }

  std::size_t dim() const noexcept { return dim_; }
  const Matrix& choi() const noexcept { return choi_; }
  const std::optional<ChannelFlags>& flags() const noexcept { return flags_; }

  /// Phi(e_ij), the (i, j) block of the Choi matrix.
  Matrix image_of_unit(std::size_t i, std::size_t j) const {
    return choi_.block(i * dim_, j * dim_, dim_, dim_);
  }

  /// Copy carrying CP/TP/unital flags evaluated at `tol`.
  Channel analysed(const Tolerance& tol = {}) const;

 private:
  std::size_t dim_;
  Matrix choi_;
  std::optional<ChannelFlags> flags_;
};

/// max(0, -lambda_min(C)).
inline double cp_defect(const Channel& ch, const Tolerance& tol = {}) {
  return std::max(0.0, -min_eigenvalue(ch.choi(), tol));
}

inline double tp_defect(const Channel& ch) {
  const std::size_t n = ch.dim();
  return distance(partial_trace_second(ch.choi(), n, n), Matrix::identity(n));
}

inline double unital_defect(const Channel& ch) {
  const std::size_t n = ch.dim();
  return distance(partial_trace_first(ch.choi(), n, n), Matrix::identity(n));
}

inline Channel Channel::analysed(const Tolerance& tol) const {
  ChannelFlags f;
  f.cp = is_hermitian(choi_, tol) && cp_defect(*this, tol) <= tol.abs_eps;
  f.tp = tp_defect(*this) <= tol.abs_eps;
  f.unital = unital_defect(*this) <= tol.abs_eps;
  return Channel(dim_, choi_, f);
}

inline Channel from_kraus(std::span<const Matrix> kraus, const Tolerance& tol = {}) {
  if (kraus.empty()) throw PreconditionError("from_kraus: empty Kraus list");
  const std::size_t n = kraus.front().rows();
  Matrix left(n, n);
  Matrix right(n, n);
  for (const auto& k : kraus) {
    if (k.rows() != n || k.cols() != n) throw PreconditionError("from_kraus: mismatched dimensions");
    left += k * k.adjoint();
    right += k.adjoint() * k;
  }
  Channel ch = Channel::from_map(n, [&](const Matrix& x) {
    Matrix acc(n, n);
    for (const auto& k : kraus) acc += k.adjoint() * x * k;
    return acc;
  });
  const Matrix id = Matrix::identity(n);
  ChannelFlags f{true, distance(left, id) <= tol.abs_eps, distance(right, id) <= tol.abs_eps};
  return Channel(n, ch.choi(), f);
}

inline Matrix apply(const Channel& ch, const Matrix& x) {
  const std::size_t n = ch.dim();
  if (x.rows() != n || x.cols() != n) throw PreconditionError("apply: dimension mismatch");
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx s = x(i, j);
      if (s == cplx{}) continue;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) r(a, b) += s * ch.choi()(i * n + a, j * n + b);
    }
  return r;
}

/// a ∘ b
inline Channel compose(const Channel& a, const Channel& b) {
  if (a.dim() != b.dim()) throw PreconditionError("compose: dimension mismatch");
  return Channel::from_map(a.dim(), [&](const Matrix& x) { return apply(a, apply(b, x)); });
}

inline Channel tensor(const Channel& a, const Channel& b) {
  const std::size_t n1 = a.dim();
  const std::size_t n2 = b.dim();
  // kron(C1, C2) has legs (in1, out1, in2, out2); reorder to (in1, in2, out1, out2).
  const std::size_t dims[] = {n1, n1, n2, n2};
  const std::size_t order[] = {0, 2, 1, 3};
  const Matrix p = leg_permutation(dims, order);
  return Channel(n1 * n2, p * kron(a.choi(), b.choi()) * p.adjoint());
}

inline double choi_distance(const Channel& a, const Channel& b) {
  if (a.dim() != b.dim()) throw PreconditionError("choi_distance: dimension mismatch");
  return distance(a.choi(), b.choi());
}

/// Affine combination of Choi matrices, sum_r w_r Phi_r.
inline Channel mix(std::span<const Channel> chans, std::span<const double> w) {
  if (chans.empty() || chans.size() != w.size()) throw PreconditionError("mix: size mismatch");
  Matrix c(chans.front().choi().rows(), chans.front().choi().cols());
  for (std::size_t r = 0; r < chans.size(); ++r) {
    if (chans[r].dim() != chans.front().dim()) throw PreconditionError("mix: dimension mismatch");
    c += chans[r].choi() * cplx(w[r]);
  }
  return Channel(chans.front().dim(), std::move(c));
}

// ---------------------------------------------------------------------------
// Operator symbol

/// Operator on H ⊗ H with <u (e_i ⊗ e_k), e_l ⊗ e_j> = tr(Phi(e_ij) e_kl).
struct OperatorSymbol {
  std::size_t dim = 0;
  Matrix matrix;
};

/// u((l,j),(i,k)) = Phi(e_ij)(l,k) = C((i,l),(j,k)).
inline OperatorSymbol symbol_of(const Channel& ch) {
  const std::size_t n = ch.dim();
  Matrix u(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          u(l * n + j, i * n + k) = ch.choi()(i * n + l, j * n + k);
  return {n, std::move(u)};
}

inline Channel channel_from_symbol(const OperatorSymbol& s) {
  const std::size_t n = s.dim;
  if (s.matrix.rows() != n * n || s.matrix.cols() != n * n) {
    throw PreconditionError("symbol matrix must be n^2 x n^2");
  }
  Matrix c(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          c(i * n + l, j * n + k) = s.matrix(l * n + j, i * n + k);
  return Channel(n, std::move(c));
}

// ---------------------------------------------------------------------------
// Bimodularity

/// Largest violation of Phi(a e_ij) = a Phi(e_ij) and Phi(e_ij a) = Phi(e_ij) a
/// over the matrix units and the given family. For a family whose span is a
/// unital algebra this is equivalent to Phi(a x b) = a Phi(x) b.
inline double bimodular_defect(const Channel& ch, std::span<const Matrix> family) {
  const std::size_t n = ch.dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix x = matrix_unit(n, i, j);
      const Matrix fx = ch.image_of_unit(i, j);
      for (const auto& a : family) {
        if (a.rows() != n || a.cols() != n) {
          throw PreconditionError("bimodular_defect: family dimension mismatch");
        }
        worst = std::max(worst, distance(apply(ch, a * x), a * fx));
        worst = std::max(worst, distance(apply(ch, x * a), fx * a));
      }
    }
  return worst;
}

inline bool check_bimodular(const Channel& ch, std::span<const Matrix> family,
                            const Tolerance& tol = {}) {
  return bimodular_defect(ch, family) <= tol.abs_eps;
}

/// D'-bimodularity where D is described by `spec`.
inline bool check_bimodular(const Channel& ch, const SubalgebraSpec& spec,
                            const Tolerance& tol = {}) {
  if (spec.ambient_dim() != ch.dim()) throw PreconditionError("check_bimodular: dimension mismatch");
  return check_bimodular(ch, commutant_generators(spec), tol);
}

}  // namespace factdil

#endif  // FACTDIL_CHANNEL_HPP
