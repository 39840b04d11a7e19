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

#ifndef FACTDIL_MATCORE_HPP
#define FACTDIL_MATCORE_HPP

/// @file
/// Dense complex matrices and the handful of linear-algebra kernels the rest
/// of the library is built on: products, Kronecker products, tensor-leg
/// permutations, slice maps against a trace profile, and a cyclic Jacobi
/// eigensolver for Hermitian matrices.
///
/// Trace conventions are fixed library-wide. The system side uses the
/// unnormalised trace `tr`; every ancilla trace is a state (`tau(1) = 1`).

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace factdil {

using cplx = std::complex<double>;

/// Violated precondition on an argument (shape, index, range).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine did not converge within its cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical invariant of a constructed object does not hold.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Absolute tolerances. `abs_eps` gates norm tests, `eig_eps` gates the
/// eigensolver and near-null-space counting.
struct Tolerance {
  double abs_eps = 1e-8;
  double eig_eps = 1e-10;

  Tolerance() = default;
  Tolerance(double abs, double eig) : abs_eps(abs), eig_eps(eig) {
    if (!(abs_eps > 0.0) || !(eig_eps > 0.0)) {
      throw PreconditionError("tolerances must be positive");
    }
  }
};

/// Row-major dense complex matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw PreconditionError("matrix entry count does not match shape");
    }
    for (const auto& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw PreconditionError("matrix entries must be finite");
      }
    }
  }
  Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw PreconditionError("ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const cplx> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  Matrix adjoint() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  Matrix transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
  }

  cplx trace() const {
    if (!square()) throw PreconditionError("trace of non-square matrix");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  /// The `rows x cols` sub-matrix with top-left corner at (r0, c0).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t rows,
               std::size_t cols) const {
    if (r0 + rows > rows_ || c0 + cols > cols_) {
      throw PreconditionError("block out of range");
    }
    Matrix b(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
      throw PreconditionError("block out of range");
    }
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
  friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw PreconditionError("product shape mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const cplx ail = a(i, l);
        if (ail == cplx{}) continue;
        const cplx* brow = &b.data_[l * b.cols_];
        cplx* rrow = &r.data_[i * r.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) rrow[j] += ail * brow[j];
      }
    }
    return r;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw PreconditionError("shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline double distance(const Matrix& a, const Matrix& b) {
  return (a - b).frobenius_norm();
}

/// Frobenius inner product tr(a* b).
inline cplx inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw PreconditionError("inner product shape mismatch");
  }
  cplx s = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) s += std::conj(ea[i]) * eb[i];
  return s;
}

/// Kronecker product; entry ((i1,i2),(j1,j2)) is a(i1,j1) * b(i2,j2).
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      const cplx s = a(i1, j1);
      if (s == cplx{}) continue;
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
          r(i1 * b.rows() + i2, j1 * b.cols() + j2) = s * b(i2, j2);
    }
  return r;
}

inline Matrix matrix_unit(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= n || j >= n) throw PreconditionError("matrix unit index out of range");
  Matrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

inline bool is_hermitian(const Matrix& a, const Tolerance& tol = {}) {
  return a.square() && distance(a, a.adjoint()) <= tol.abs_eps;
}

inline bool is_unitary(const Matrix& a, const Tolerance& tol = {}) {
  if (!a.square()) throw PreconditionError("is_unitary: non-square input");
  const auto id = Matrix::identity(a.rows());
  return distance(a.adjoint() * a, id) <= tol.abs_eps &&
         distance(a * a.adjoint(), id) <= tol.abs_eps;
}

/// Permutation matrix P with P e_i = e_{perm[i]}.
inline Matrix permutation_matrix(std::span<const std::size_t> perm) {
  Matrix p(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size()) throw PreconditionError("bad permutation");
    p(perm[i], i) = 1.0;
  }
  return p;
}

/// Permutation of a tensor-product basis that reorders tensor legs.
///
/// `dims` lists the leg dimensions in the current (most-significant first)
/// order; `order[p]` names the old leg that ends up in position p. The
/// returned matrix P maps the old basis vector to the new one, so that
/// P (x_0 ⊗ ... ⊗ x_{m-1}) P* places x_{order[p]} in slot p.
inline Matrix leg_permutation(std::span<const std::size_t> dims,
                              std::span<const std::size_t> order) {
  const std::size_t legs = dims.size();
  if (order.size() != legs) throw PreconditionError("leg order size mismatch");
  std::vector<bool> seen(legs, false);
  for (auto o : order) {
    if (o >= legs || seen[o]) throw PreconditionError("leg order is not a permutation");
    seen[o] = true;
  }
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::size_t> new_dims(legs);
  for (std::size_t p = 0; p < legs; ++p) new_dims[p] = dims[order[p]];

  std::vector<std::size_t> perm(total);
  std::vector<std::size_t> digits(legs);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t l = legs; l-- > 0;) {
      digits[l] = rest % dims[l];
      rest /= dims[l];
    }
    std::size_t out = 0;
    for (std::size_t p = 0; p < legs; ++p) out = out * new_dims[p] + digits[order[p]];
    perm[idx] = out;
  }
  return permutation_matrix(perm);
}

/// Validates a trace profile: non-negative weights over the ancilla basis
/// summing to one.
inline void require_trace_profile(std::span<const double> w) {
  double s = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw PreconditionError("trace weights must be finite and non-negative");
    }
    s += x;
  }
  if (std::abs(s - 1.0) > 1e-12) {
    throw PreconditionError("trace weights must sum to one");
  }
}

/// (id ⊗ tau) on M_n ⊗ M_k, with tau(y) = sum_a w[a] y(a, a).
///
/// For an ancilla presented as a weighted block algebra, `w` spreads each
/// block weight uniformly over the block's diagonal, which reproduces the
/// algebra trace on its elements.
inline Matrix slice_right(const Matrix& z, std::size_t n, std::size_t k,
                          std::span<const double> trace_weights) {
  if (z.rows() != n * k || z.cols() != n * k) {
    throw PreconditionError("slice_right: dimension mismatch");
  }
  if (trace_weights.size() != k) {
    throw PreconditionError("slice_right: weight profile length mismatch");
  }
  require_trace_profile(trace_weights);
  Matrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t a = 0; a < k; ++a) s += trace_weights[a] * z(i * k + a, j * k + a);
      r(i, j) = s;
    }
  return r;
}

/// Unnormalised partial traces on M_a ⊗ M_b.
inline Matrix partial_trace_second(const Matrix& z, std::size_t a, std::size_t b) {
  if (z.rows() != a * b || z.cols() != a * b) {
    throw PreconditionError("partial trace: dimension mismatch");
  }
  Matrix r(a, a);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      for (std::size_t l = 0; l < b; ++l) r(i, j) += z(i * b + l, j * b + l);
  return r;
}

inline Matrix partial_trace_first(const Matrix& z, std::size_t a, std::size_t b) {
  if (z.rows() != a * b || z.cols() != a * b) {
    throw PreconditionError("partial trace: dimension mismatch");
  }
  Matrix r(b, b);
  for (std::size_t l = 0; l < a; ++l)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) r(i, j) += z(l * b + i, l * b + j);
  return r;
}

struct EigenSystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
///
/// Sweeps until the off-diagonal Frobenius mass drops below
/// `tol.eig_eps * max(1, ||a||_F)`, then runs one polishing sweep; throws
/// ConvergenceError after 100 sweeps.
inline EigenSystem hermitian_eig(const Matrix& a, const Tolerance& tol = {}) {
  if (!a.square()) throw PreconditionError("hermitian_eig: non-square input");
  const double scale = std::max(1.0, a.frobenius_norm());
  if (distance(a, a.adjoint()) > tol.abs_eps * scale) {
    throw PreconditionError("hermitian_eig: input is not Hermitian");
  }
  const std::size_t n = a.rows();
  Matrix m = a;
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  }
  Matrix v = Matrix::identity(n);

  auto off_mass = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  const double target = tol.eig_eps * scale;
  auto sweep_once = [&] {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = m(p, q);
        const double mag = std::abs(apq);
        // Subnormal entries would give an inexact phase and a non-unitary J.
        if (mag < std::numeric_limits<double>::min()) {
          m(p, q) = 0.0;
          m(q, p) = 0.0;
          continue;
        }
        cplx phase = apq / mag;
        phase /= std::abs(phase);
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // J = diag(1, conj(phase)) * R(c, s): the phase makes a(p, q) real,
        // then a real Jacobi rotation annihilates it.
        const cplx jpp = c;
        const cplx jpq = s;
        const cplx jqp = -s * std::conj(phase);
        const cplx jqq = c * std::conj(phase);
        // m <- m J
        for (std::size_t r = 0; r < n; ++r) {
          const cplx mp = m(r, p);
          const cplx mq = m(r, q);
          m(r, p) = mp * jpp + mq * jqp;
          m(r, q) = mp * jpq + mq * jqq;
        }
        // m <- J* m
        for (std::size_t col = 0; col < n; ++col) {
          const cplx mp = m(p, col);
          const cplx mq = m(q, col);
          m(p, col) = std::conj(jpp) * mp + std::conj(jqp) * mq;
          m(q, col) = std::conj(jpq) * mp + std::conj(jqq) * mq;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        m(p, p) = m(p, p).real();
        m(q, q) = m(q, q).real();
        for (std::size_t r = 0; r < n; ++r) {
          const cplx vp = v(r, p);
          const cplx vq = v(r, q);
          v(r, p) = vp * jpp + vq * jqp;
          v(r, q) = vp * jpq + vq * jqq;
        }
      }
    }
  };
  int sweep = 0;
  for (; sweep < kMaxSweeps && off_mass() >= target; ++sweep) sweep_once();
  // One more sweep once below target: convergence is quadratic, so this
  // takes the residual from eig_eps down to rounding level.
  if (sweep < kMaxSweeps && off_mass() > 0.0) sweep_once();
  if (off_mass() >= target) {
    throw ConvergenceError("hermitian_eig: no convergence within 100 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return m(x, x).real() < m(y, y).real();
  });
  EigenSystem es{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    es.values[c] = m(order[c], order[c]).real();
    for (std::size_t r = 0; r < n; ++r) es.vectors(r, c) = v(r, order[c]);
  }
  return es;
}

inline double min_eigenvalue(const Matrix& a, const Tolerance& tol = {}) {
  const auto es = hermitian_eig(a, tol);
  return es.values.empty() ? 0.0 : es.values.front();
}

/// f(a) for Hermitian a, through the spectral decomposition.
template <class F>
Matrix hermitian_function(const Matrix& a, F&& f, const Tolerance& tol = {}) {
  const auto es = hermitian_eig(a, tol);
  const std::size_t n = a.rows();
  Matrix r(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const cplx fc = f(es.values[c]);
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = es.vectors(i, c) * fc;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vi * std::conj(es.vectors(j, c));
    }
  }
  return r;
}

/// exp(i a) for Hermitian a.
inline Matrix exp_i_hermitian(const Matrix& a, const Tolerance& tol = {}) {
  return hermitian_function(
      a, [](double x) { return std::polar(1.0, x); }, tol);
}

/// Gram-Schmidt on the columns (modified, two passes). The diagonal of the
/// implied triangular factor is real positive, so a Ginibre input yields a
/// Haar-distributed unitary.
inline Matrix orthonormalize_columns(const Matrix& a) {
  if (!a.square()) throw PreconditionError("orthonormalize_columns: non-square input");
  const std::size_t n = a.rows();
  Matrix q = a;
  for (std::size_t c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        cplx proj = 0.0;
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(q(r, p)) * q(r, c);
        for (std::size_t r = 0; r < n; ++r) q(r, c) -= proj * q(r, p);
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < n; ++r) nrm += std::norm(q(r, c));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-300) throw PreconditionError("orthonormalize_columns: rank deficient");
    for (std::size_t r = 0; r < n; ++r) q(r, c) /= nrm;
  }
  return q;
}

/// Solves a x = b by Gaussian elimination with partial pivoting.
inline Matrix solve(const Matrix& a, const Matrix& b) {
  if (!a.square() || a.rows() != b.rows()) throw PreconditionError("solve: shape mismatch");
  const std::size_t n = a.rows();
  Matrix m = a;
  Matrix x = b;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
    if (std::abs(m(piv, c)) < 1e-14) throw PreconditionError("solve: singular matrix");
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(c, j), m(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(c, j), x(piv, j));
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = m(r, c) / m(c, c);
      if (f == cplx{}) continue;
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(r, j) -= f * x(c, j);
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      cplx s = x(c, j);
      for (std::size_t k = c + 1; k < n; ++k) s -= m(c, k) * x(k, j);
      x(c, j) = s / m(c, c);
    }
  }
  return x;
}

}  // namespace factdil

#endif  // FACTDIL_MATCORE_HPP
