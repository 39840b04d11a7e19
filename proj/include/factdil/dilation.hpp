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

#ifndef FACTDIL_DILATION_HPP
#define FACTDIL_DILATION_HPP

/// @file
/// Factorisable presentations Phi_D(x) = (id ⊗ tau)(D* (x ⊗ 1) D).
///
/// D is a unitary on H ⊗ K, indexed system-major: row (i, a) is i * k + a.
/// Its slices d_ij are the k x k blocks, so D = sum_ij e_ij ⊗ d_ij. D
/// "returns to N" when every product d_ij* d_kl lies in the ancilla algebra.

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "factdil/algebra.hpp"
#include "factdil/channel.hpp"
#include "factdil/matcore.hpp"

namespace factdil {

/// Outcome of presentation validation. Stages run in order and stop at the
/// first failure: unitarity, returns-to-ancilla, trace preservation,
/// modularity.
struct PresentationCheck {
  enum class Stage { ok, unitarity, returns, trace_preservation, modularity };
  Stage stage = Stage::ok;
  std::array<std::size_t, 4> where{};  // violating index quadruple, if any
  double measured = 0.0;
  std::string message;

  explicit operator bool() const noexcept { return stage == Stage::ok; }
};

class FactorizablePresentation {
 public:
  /// Validates every invariant; throws InvariantError naming the first
  /// violation.
  static FactorizablePresentation create(std::size_t sys_dim, BlockAlgebra ancilla, Matrix d,
                                         std::optional<SubalgebraSpec> modular_over = std::nullopt,
                                         const Tolerance& tol = {}) {
    FactorizablePresentation p(sys_dim, std::move(ancilla), std::move(d), std::move(modular_over));
    const auto check = p.validate(tol);
    if (!check) throw InvariantError(check.message);
    p.validated_ = true;
    return p;
  }

  /// Shape-checked only. For negative tests and for inputs whose
  /// invariants are examined separately.
  static FactorizablePresentation unchecked(std::size_t sys_dim, BlockAlgebra ancilla, Matrix d,
                                            std::optional<SubalgebraSpec> modular_over = std::nullopt) {
    return FactorizablePresentation(sys_dim, std::move(ancilla), std::move(d),
                                    std::move(modular_over));
  }

  std::size_t sys_dim() const noexcept { return n_; }
  std::size_t ancilla_dim() const noexcept { return ancilla_.ambient_dim(); }
  const BlockAlgebra& ancilla() const noexcept { return ancilla_; }
  const Matrix& unitary() const noexcept { return d_; }
  const std::optional<SubalgebraSpec>& modular_over() const noexcept { return modular_over_; }
  bool validated() const noexcept { return validated_; }

  /// d_ij, the (i, j) block of D.
  Matrix slice_entry(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) throw PreconditionError("slice_entry: index out of range");
    const std::size_t k = ancilla_dim();
    return d_.block(i * k, j * k, k, k);
  }

  /// The k x nk row block of D belonging to system index i.
  Matrix row_block(std::size_t i) const {
    const std::size_t k = ancilla_dim();
    return d_.block(i * k, 0, k, n_ * k);
  }

  /// D* (e_ij ⊗ 1) D.
  Matrix conjugated_unit(std::size_t i, std::size_t j) const {
    return row_block(i).adjoint() * row_block(j);
  }

  PresentationCheck validate(const Tolerance& tol = {}, bool all_basis_vectors = false) const;

 private:
  FactorizablePresentation(std::size_t n, BlockAlgebra ancilla, Matrix d,
                           std::optional<SubalgebraSpec> modular_over)
      : n_(n), ancilla_(std::move(ancilla)), d_(std::move(d)), modular_over_(std::move(modular_over)) {
    const std::size_t nk = n_ * ancilla_.ambient_dim();
    if (n_ == 0) throw PreconditionError("presentation: system dimension must be positive");
    if (d_.rows() != nk || d_.cols() != nk) {
      throw PreconditionError("presentation: D must be (n k) x (n k)");
    }
    if (modular_over_ && modular_over_->ambient_dim() != n_) {
      throw PreconditionError("presentation: modular_over dimension mismatch");
    }
  }

  std::size_t n_;
  BlockAlgebra ancilla_;
  Matrix d_;
  std::optional<SubalgebraSpec> modular_over_;
  bool validated_ = false;
};

/// First quadruple (i, j, k, l) with d_ij* d_kl outside the ancilla, and the
/// size of that violation.
struct ReturnsViolation {
  std::array<std::size_t, 4> where{};
  double defect = 0.0;
};

inline std::optional<ReturnsViolation> first_returns_violation(const FactorizablePresentation& p,
                                                               const Tolerance& tol = {}) {
  const std::size_t n = p.sys_dim();
  std::vector<Matrix> slices;
  slices.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) slices.push_back(p.slice_entry(i, j));
  for (std::size_t a = 0; a < n * n; ++a) {
    const Matrix left = slices[a].adjoint();
    for (std::size_t b = 0; b < n * n; ++b) {
      const double defect = algebra_defect(p.ancilla(), left * slices[b]);
      if (defect > tol.abs_eps) return ReturnsViolation{{a / n, a % n, b / n, b % n}, defect};
    }
  }
  return std::nullopt;
}

/// d_ij* d_kl in N for all i, j, k, l.
inline bool returns_to_ancilla(const FactorizablePresentation& p, const Tolerance& tol = {}) {
  return !first_returns_violation(p, tol).has_value();
}

/// Every k x k block of D* (e_ij ⊗ 1) D in N, for all matrix units e_ij.
/// Equivalent to returns_to_ancilla; computed independently to test that.
inline bool returns_equivalence_check(const FactorizablePresentation& p, const Tolerance& tol = {}) {
  const std::size_t n = p.sys_dim();
  const std::size_t k = p.ancilla_dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix z = p.conjugated_unit(i, j);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          if (algebra_defect(p.ancilla(), z.block(r * k, c * k, k, k)) > tol.abs_eps) return false;
    }
  return true;
}

/// (tr ⊗ tau)(D* (e_ee ⊗ 1) D).
inline double trace_preservation_value(const FactorizablePresentation& p, std::size_t e_index) {
  if (e_index >= p.sys_dim()) throw PreconditionError("trace_preservation_value: index out of range");
  const auto w = p.ancilla().trace_profile();
  return slice_right(p.conjugated_unit(e_index, e_index), p.sys_dim(), p.ancilla_dim(), w)
      .trace()
      .real();
}

inline PresentationCheck FactorizablePresentation::validate(const Tolerance& tol,
                                                            bool all_basis_vectors) const {
  using Stage = PresentationCheck::Stage;
  PresentationCheck out;
  const std::size_t nk = d_.rows();
  const Matrix id = Matrix::identity(nk);
  const double u1 = distance(d_.adjoint() * d_, id);
  const double u2 = distance(d_ * d_.adjoint(), id);
  if (u1 > tol.abs_eps || u2 > tol.abs_eps) {
    out.stage = Stage::unitarity;
    out.measured = std::max(u1, u2);
    out.message = "D is not unitary: defect " + std::to_string(out.measured);
    return out;
  }
  if (auto v = first_returns_violation(*this, tol)) {
    out.stage = Stage::returns;
    out.where = v->where;
    out.measured = v->defect;
    std::ostringstream msg;
    msg << "D does not return to the ancilla: d_{" << v->where[0] << "," << v->where[1]
        << "}* d_{" << v->where[2] << "," << v->where[3] << "} leaves N by " << v->defect;
    out.message = msg.str();
    return out;
  }
  const std::size_t last = all_basis_vectors ? n_ : 1;
  for (std::size_t e = 0; e < last; ++e) {
    const double tp = trace_preservation_value(*this, e);
    if (std::abs(tp - 1.0) > tol.abs_eps) {
      out.stage = Stage::trace_preservation;
      out.where = {e, e, 0, 0};
      out.measured = std::abs(tp - 1.0);
      out.message = "trace preservation fails at basis vector " + std::to_string(e) +
                    ": value " + std::to_string(tp);
      return out;
    }
  }
  if (modular_over_) {
    // Each ancilla slice (a, b) of D, an n x n matrix, must lie in D.
    const std::size_t k = ancilla_dim();
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) {
        Matrix s(n_, n_);
        for (std::size_t i = 0; i < n_; ++i)
          for (std::size_t j = 0; j < n_; ++j) s(i, j) = d_(i * k + a, j * k + b);
        const double defect = distance(s, conditional_expectation(*modular_over_, s));
        if (defect > tol.abs_eps) {
          out.stage = Stage::modularity;
          out.where = {a, b, 0, 0};
          out.measured = defect;
          out.message = "ancilla slice (" + std::to_string(a) + "," + std::to_string(b) +
                        ") of D leaves the system algebra";
          return out;
        }
      }
  }
  return out;
}

inline void require_valid(const FactorizablePresentation& p, const Tolerance& tol = {}) {
  if (p.validated()) return;
  const auto check = p.validate(tol);
  if (!check) throw InvariantError(check.message);
}

/// The channel Phi_D. Throws InvariantError for an invalid presentation.
inline Channel phi_of(const FactorizablePresentation& p, const Tolerance& tol = {}) {
  require_valid(p, tol);
  const std::size_t n = p.sys_dim();
  const std::size_t k = p.ancilla_dim();
  const auto w = p.ancilla().trace_profile();
  std::vector<Matrix> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(p.row_block(i));
  Matrix choi(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      choi.set_block(i * n, j * n, slice_right(rows[i].adjoint() * rows[j], n, k, w));
  return Channel(n, std::move(choi));
}

/// Places D, acting on (H, K), onto legs (0, leg) of H ⊗ K^{⊗ m}; ancilla
/// legs are numbered 1..m.
inline Matrix leg_operator(const Matrix& d, std::size_t n, std::size_t k, std::size_t m,
                           std::size_t leg) {
  if (leg == 0 || leg > m) throw PreconditionError("leg_operator: leg out of range");
  std::size_t rest = 1;
  for (std::size_t r = 1; r < m; ++r) rest *= k;
  const Matrix placed = kron(d, Matrix::identity(rest));
  // Current legs: H, K_leg, then the other ancilla legs in increasing order.
  std::vector<std::size_t> current{0, leg};
  for (std::size_t r = 1; r <= m; ++r)
    if (r != leg) current.push_back(r);
  std::vector<std::size_t> dims(m + 1, k);
  dims[0] = n;
  std::vector<std::size_t> order(m + 1);
  for (std::size_t pos = 0; pos <= m; ++pos)
    order[current[pos]] = pos;  // target slot `current[pos]` takes old leg `pos`
  const Matrix perm = leg_permutation(dims, order);
  return perm * placed * perm.adjoint();
}

/// u = (id ⊗ id ⊗ tau)(D_13* D_23) on H ⊗ H.
inline OperatorSymbol symbol_formula(const FactorizablePresentation& p, const Tolerance& tol = {}) {
  require_valid(p, tol);
  const std::size_t n = p.sys_dim();
  const std::size_t k = p.ancilla_dim();
  const Matrix d23 = kron(Matrix::identity(n), p.unitary());
  // D ⊗ I_H has legs (H1, K, H2); move K to the end.
  const std::size_t dims[] = {n, k, n};
  const std::size_t order[] = {0, 2, 1};
  const Matrix flip = leg_permutation(dims, order);
  const Matrix d13 = flip * kron(p.unitary(), Matrix::identity(n)) * flip.adjoint();
  return {n, slice_right(d13.adjoint() * d23, n * n, k, p.ancilla().trace_profile())};
}

/// Largest n * k^m accepted by power_channel.
inline constexpr std::size_t kPowerSizeCap = 4096;

/// Phi^m through the dilation power formula: with W = D_{1,m} ... D_{1,1}
/// on H ⊗ K^{⊗ m}, Phi^m(x) = (id ⊗ tau^{⊗ m})(W* (x ⊗ 1) W).
inline Channel power_channel(const FactorizablePresentation& p, std::size_t m,
                             const Tolerance& tol = {}) {
  require_valid(p, tol);
  const std::size_t n = p.sys_dim();
  if (m == 0) return Channel::identity(n);
  const std::size_t k = p.ancilla_dim();
  std::size_t km = 1;
  for (std::size_t r = 0; r < m; ++r) {
    km *= k;
    if (n * km > kPowerSizeCap) throw PreconditionError("power_channel: size cap exceeded");
  }
  Matrix w = Matrix::identity(n * km);
  for (std::size_t leg = 1; leg <= m; ++leg) w = leg_operator(p.unitary(), n, k, m, leg) * w;

  std::vector<double> profile{1.0};
  const auto base = p.ancilla().trace_profile();
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<double> next;
    for (double a : profile)
      for (double b : base) next.push_back(a * b);
    profile = std::move(next);
  }
  std::vector<Matrix> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back(w.block(i * km, 0, km, n * km));
  Matrix choi(n * n, n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      choi.set_block(i * n, j * n, slice_right(rows[i].adjoint() * rows[j], n, km, profile));
  return Channel(n, std::move(choi));
}

/// Presentation of lambda Phi_1 + (1 - lambda) Phi_2 over N_1 ⊕ N_2 with
/// the state lambda tau_1 ⊕ (1 - lambda) tau_2. At the endpoints the
/// surviving presentation is returned unchanged, since a zero-weight block
/// is not a faithful state.
inline FactorizablePresentation convex_combine(const FactorizablePresentation& p1,
                                               const FactorizablePresentation& p2, double lambda,
                                               const Tolerance& tol = {}) {
  if (p1.sys_dim() != p2.sys_dim()) throw PreconditionError("convex_combine: dimension mismatch");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw PreconditionError("convex_combine: lambda outside [0, 1]");
  require_valid(p1, tol);
  require_valid(p2, tol);
  if (lambda == 1.0) return p1;
  if (lambda == 0.0) return p2;

  const std::size_t n = p1.sys_dim();
  const std::size_t k1 = p1.ancilla_dim();
  const std::size_t k2 = p2.ancilla_dim();
  const std::size_t k = k1 + k2;
  std::vector<std::size_t> dims = p1.ancilla().block_dims();
  std::vector<double> weights;
  for (double a : p1.ancilla().weights()) weights.push_back(lambda * a);
  for (auto d : p2.ancilla().block_dims()) dims.push_back(d);
  for (double a : p2.ancilla().weights()) weights.push_back((1.0 - lambda) * a);

  // (H ⊗ K1) ⊕ (H ⊗ K2) -> H ⊗ (K1 ⊕ K2)
  std::vector<std::size_t> perm(n * k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < k1; ++a) perm[i * k1 + a] = i * k + a;
    for (std::size_t b = 0; b < k2; ++b) perm[n * k1 + i * k2 + b] = i * k + k1 + b;
  }
  const Matrix pm = permutation_matrix(perm);
  Matrix sum(n * k, n * k);
  sum.set_block(0, 0, p1.unitary());
  sum.set_block(n * k1, n * k1, p2.unitary());

  std::optional<SubalgebraSpec> modular;
  if (p1.modular_over() && p2.modular_over() && *p1.modular_over() == *p2.modular_over()) {
    modular = p1.modular_over();
  }
  return FactorizablePresentation::create(n, BlockAlgebra(std::move(dims), std::move(weights)),
                                          pm * sum * pm.adjoint(), std::move(modular), tol);
}

/// Tensor product of ancillas, blocks ordered lexicographically by
/// (block of N_1, block of N_2), together with the permutation of K_1 ⊗ K_2
/// that makes each product block contiguous.
struct AncillaProduct {
  BlockAlgebra algebra;
  Matrix regroup;
};

inline AncillaProduct tensor_ancilla(const BlockAlgebra& a, const BlockAlgebra& b) {
  std::vector<std::size_t> dims;
  std::vector<double> weights;
  const std::size_t k1 = a.ambient_dim();
  const std::size_t k2 = b.ambient_dim();
  std::vector<std::size_t> perm(k1 * k2);
  std::size_t next = 0;
  for (std::size_t b1 = 0; b1 < a.block_count(); ++b1)
    for (std::size_t b2 = 0; b2 < b.block_count(); ++b2) {
      const std::size_t d1 = a.block_dims()[b1];
      const std::size_t d2 = b.block_dims()[b2];
      dims.push_back(d1 * d2);
      weights.push_back(a.weights()[b1] * b.weights()[b2]);
      for (std::size_t r1 = 0; r1 < d1; ++r1)
        for (std::size_t r2 = 0; r2 < d2; ++r2)
          perm[(a.offset(b1) + r1) * k2 + b.offset(b2) + r2] = next++;
    }
  double total = 0.0;
  for (double w : weights) total += w;
  for (auto& w : weights) w /= total;
  return {BlockAlgebra(std::move(dims), std::move(weights)), permutation_matrix(perm)};
}

/// Presentation of Phi_1 ⊗ Phi_2 on H_1 ⊗ H_2 over N_1 ⊗ N_2.
inline FactorizablePresentation tensor_presentation(const FactorizablePresentation& p1,
                                                    const FactorizablePresentation& p2,
                                                    const Tolerance& tol = {}) {
  require_valid(p1, tol);
  require_valid(p2, tol);
  const std::size_t n1 = p1.sys_dim();
  const std::size_t n2 = p2.sys_dim();
  const std::size_t k1 = p1.ancilla_dim();
  const std::size_t k2 = p2.ancilla_dim();
  // D1 ⊗ D2 has legs (H1, K1, H2, K2); reorder to (H1, H2, K1, K2).
  const std::size_t dims[] = {n1, k1, n2, k2};
  const std::size_t order[] = {0, 2, 1, 3};
  const Matrix flip = leg_permutation(dims, order);
  auto anc = tensor_ancilla(p1.ancilla(), p2.ancilla());
  const Matrix q = kron(Matrix::identity(n1 * n2), anc.regroup) * flip;
  return FactorizablePresentation::create(n1 * n2, std::move(anc.algebra),
                                          q * kron(p1.unitary(), p2.unitary()) * q.adjoint(),
                                          std::nullopt, tol);
}

}  // namespace factdil

#endif  // FACTDIL_DILATION_HPP
