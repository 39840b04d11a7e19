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

#ifndef FACTDIL_HIERARCHY_HPP
#define FACTDIL_HIERARCHY_HPP

/// @file
/// Membership of a channel in the convex hull of conjugations x -> u* x u
/// by unitaries of a block subalgebra D of M_n.
///
/// `conv_membership` decides membership relative to a finite family by
/// Frank-Wolfe over the simplex. Its non-membership verdict is a statement
/// about that family only. `nearest_mixed_unitary` additionally moves the
/// unitaries and can only ever report membership or give up.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "factdil/algebra.hpp"
#include "factdil/channel.hpp"
#include "factdil/dilation.hpp"
#include "factdil/random.hpp"

namespace factdil {

enum class Verdict { member, non_member_at_tolerance, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::member: return "member";
    case Verdict::non_member_at_tolerance: return "non_member_at_tolerance";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct MembershipCertificate {
  std::vector<double> weights;
  double residual = 0.0;  // Frobenius distance of Choi matrices
  std::size_t iterations = 0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<double> residual_trace;  // residual before each iteration, then final
};

class UnitaryFamily {
 public:
  UnitaryFamily(SubalgebraSpec spec, std::vector<Matrix> unitaries, const Tolerance& tol = {})
      : spec_(std::move(spec)), unitaries_(std::move(unitaries)) {
    for (const auto& u : unitaries_) {
      if (u.rows() != spec_.ambient_dim() || u.cols() != spec_.ambient_dim()) {
        throw PreconditionError("unitary family: dimension mismatch");
      }
      if (!is_unitary(u, tol)) throw PreconditionError("unitary family: member is not unitary");
      if (!contains(spec_, u, tol)) throw PreconditionError("unitary family: member outside the algebra");
    }
  }

  const SubalgebraSpec& spec() const noexcept { return spec_; }
  const std::vector<Matrix>& unitaries() const noexcept { return unitaries_; }
  std::size_t size() const noexcept { return unitaries_.size(); }

 private:
  SubalgebraSpec spec_;
  std::vector<Matrix> unitaries_;
};

inline constexpr std::size_t kDefaultMaxIter = 20000;
inline constexpr double kGapStop = 1e-12;

namespace detail {

inline double real_inner(const Matrix& a, const Matrix& b) { return inner(a, b).real(); }

}  // namespace detail

/// Minimises ||C(target) - sum_i w_i C(Ad_{u_i})||_F^2 over the simplex with
/// away-step Frank-Wolfe and exact line search.
inline MembershipCertificate conv_membership(const Channel& target, const UnitaryFamily& fam,
                                             const Tolerance& tol = {},
                                             std::size_t max_iter = kDefaultMaxIter) {
  if (fam.size() == 0) throw PreconditionError("conv_membership: empty family");
  if (target.dim() != fam.spec().ambient_dim()) {
    throw PreconditionError("conv_membership: dimension mismatch");
  }
  const std::size_t m = fam.size();
  std::vector<Matrix> atoms;
  atoms.reserve(m);
  for (const auto& u : fam.unitaries()) atoms.push_back(Channel::conjugation(u).choi());
  std::vector<double> gram(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) gram[i * m + j] = detail::real_inner(atoms[i], atoms[j]);

  const Matrix& c = target.choi();
  MembershipCertificate cert;
  cert.weights.assign(m, 0.0);
  {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double d = distance(c, atoms[i]);
      if (d < best_d) best_d = d, best = i;
    }
    cert.weights[best] = 1.0;
  }

  const double tol2 = tol.abs_eps * tol.abs_eps;
  std::vector<double> grad(m);
  auto residual_matrix = [&] {
    Matrix r = c;
    for (std::size_t i = 0; i < m; ++i)
      if (cert.weights[i] != 0.0) r -= atoms[i] * cplx(cert.weights[i]);
    return r;
  };

  double f = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  std::size_t it = 0;
  for (;; ++it) {
    const Matrix r = residual_matrix();
    f = std::pow(r.frobenius_norm(), 2);
    cert.residual_trace.push_back(std::sqrt(f));
    for (std::size_t i = 0; i < m; ++i) grad[i] = -2.0 * detail::real_inner(atoms[i], r);
    double g_dot_w = 0.0;
    std::size_t s = 0;
    std::size_t v = 0;
    double g_away = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      g_dot_w += grad[i] * cert.weights[i];
      if (grad[i] < grad[s]) s = i;
      if (cert.weights[i] > 0.0 && grad[i] > g_away) g_away = grad[i], v = i;
    }
    gap = g_dot_w - grad[s];
    if (f <= tol2 || f - gap > tol2 || gap <= kGapStop || it >= max_iter) break;

    std::vector<double> dir(m, 0.0);
    double step_max = 1.0;
    const double away_gap = g_away - g_dot_w;
    if (gap >= away_gap) {
      for (std::size_t i = 0; i < m; ++i) dir[i] = -cert.weights[i];
      dir[s] += 1.0;
    } else {
      for (std::size_t i = 0; i < m; ++i) dir[i] = cert.weights[i];
      dir[v] -= 1.0;
      step_max = cert.weights[v] / (1.0 - cert.weights[v]);
    }
    double slope = 0.0;
    double curv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      slope += grad[i] * dir[i];
      for (std::size_t j = 0; j < m; ++j) curv += dir[i] * gram[i * m + j] * dir[j];
    }
    double step = curv > 0.0 ? -slope / (2.0 * curv) : step_max;
    step = std::clamp(step, 0.0, step_max);
    if (step == 0.0) break;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      cert.weights[i] = std::max(0.0, cert.weights[i] + step * dir[i]);
      if (cert.weights[i] < 1e-300) cert.weights[i] = 0.0;
      total += cert.weights[i];
    }
    for (auto& w : cert.weights) w /= total;
  }

  cert.iterations = it;
  cert.residual = std::sqrt(f);
  if (f <= tol2) {
    cert.verdict = Verdict::member;
  } else if (f - gap > tol2) {
    cert.verdict = Verdict::non_member_at_tolerance;
  } else {
    cert.verdict = Verdict::inconclusive;
  }
  return cert;
}

/// sum_i w_i Ad_{u_i}
inline Channel mixture(const UnitaryFamily& fam, std::span<const double> weights) {
  std::vector<Channel> chans;
  for (const auto& u : fam.unitaries()) chans.push_back(Channel::conjugation(u));
  return mix(chans, weights);
}

struct MixedUnitaryFit {
  MembershipCertificate certificate;
  std::vector<Matrix> unitaries;
};

namespace detail {

/// f(u) with weights fixed: ||C(target) - sum_j w_j C(Ad_{u_j})||_F^2.
inline double mixture_objective(const Matrix& target_choi, std::span<const Matrix> us,
                                std::span<const double> w) {
  Matrix r = target_choi;
  for (std::size_t j = 0; j < us.size(); ++j)
    if (w[j] != 0.0) r -= Channel::conjugation(us[j]).choi() * cplx(w[j]);
  return std::pow(r.frobenius_norm(), 2);
}

/// One Riemannian descent step on u_i within the unitary group of D: the
/// Euclidean gradient is pulled back to the Lie algebra, pinched into D and
/// followed along a Cayley curve with backtracking.
inline bool cayley_step(const Matrix& target_choi, std::vector<Matrix>& us,
                        std::span<const double> w, std::size_t i, const SubalgebraSpec& spec) {
  if (w[i] == 0.0) return false;
  const std::size_t n = us[i].rows();
  // C(Ad_u) = conj(v v*) with v the row-major vectorisation of u.
  Matrix rbar = target_choi;
  for (std::size_t j = 0; j < us.size(); ++j)
    if (w[j] != 0.0) rbar -= Channel::conjugation(us[j]).choi() * cplx(w[j]);
  for (auto& z : rbar.entries()) z = std::conj(z);
  Matrix v(n * n, 1, std::vector<cplx>(us[i].entries().begin(), us[i].entries().end()));
  const Matrix gv = rbar * v * cplx(-4.0 * w[i]);
  const Matrix grad(n, n, std::vector<cplx>(gv.entries().begin(), gv.entries().end()));
  const Matrix ug = us[i].adjoint() * grad;
  const Matrix skew = (ug - ug.adjoint()) * cplx(0.5);
  const Matrix dir = conditional_expectation(spec, skew) * cplx(-1.0);
  if (dir.frobenius_norm() < 1e-15) return false;

  const double f0 = mixture_objective(target_choi, us, w);
  const Matrix id = Matrix::identity(n);
  const Matrix saved = us[i];
  for (double t = 1.0; t > 1e-12; t *= 0.5) {
    const Matrix half = dir * cplx(0.5 * t);
    Matrix cand = saved * solve(id - half, id + half);
    us[i] = orthonormalize_columns(cand);
    if (mixture_objective(target_choi, us, w) < f0) return true;
  }
  us[i] = saved;
  return false;
}

}  // namespace detail

/// Heuristic upper bound on the distance from `target` to the mixtures of
/// m conjugations by unitaries of D. Best certificate over restarts.
inline MixedUnitaryFit nearest_mixed_unitary_fit(const Channel& target, const SubalgebraSpec& spec,
                                                 std::size_t m, const Tolerance& tol, std::size_t restarts,
                                                 Rng& rng, std::size_t outer_iters = 200) {
  if (m == 0) throw PreconditionError("nearest_mixed_unitary: m must be at least 1");
  if (target.dim() != spec.ambient_dim()) throw PreconditionError("nearest_mixed_unitary: dimension mismatch");
  MixedUnitaryFit best;
  best.certificate.residual = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    Rng local = rng.split();
    std::vector<Matrix> us;
    for (std::size_t i = 0; i < m; ++i) us.push_back(random_unitary_in(local, spec));
    MembershipCertificate cert;
    std::size_t total_iters = 0;
    for (std::size_t outer = 0; outer < outer_iters; ++outer) {
      cert = conv_membership(target, UnitaryFamily(spec, us), tol);
      total_iters += cert.iterations;
      if (cert.verdict == Verdict::member) break;
      bool moved = false;
      for (std::size_t i = 0; i < m; ++i)
        moved = detail::cayley_step(target.choi(), us, cert.weights, i, spec) || moved;
      if (!moved) break;
    }
    cert = conv_membership(target, UnitaryFamily(spec, us), tol);
    cert.iterations += total_iters;
    cert.verdict = cert.residual <= tol.abs_eps ? Verdict::member : Verdict::inconclusive;
    if (cert.residual < best.certificate.residual) {
      best.certificate = std::move(cert);
      best.unitaries = us;
    }
  }
  return best;
}

inline MembershipCertificate nearest_mixed_unitary(const Channel& target, const SubalgebraSpec& spec,
                                                   std::size_t m, const Tolerance& tol,
                                                   std::size_t restarts, Rng& rng) {
  return nearest_mixed_unitary_fit(target, spec, m, tol, restarts, rng).certificate;
}

struct ConvergenceReport {
  std::vector<double> distances;  // consecutive Choi distances
  bool cauchy = true;
};

/// Consecutive Choi distances of Phi_{D_n}; the sequence counts as Cauchy
/// when its second half (at least two terms) has Choi diameter at most
/// tol.abs_eps.
inline ConvergenceReport convergence_monitor(std::span<const FactorizablePresentation> seq,
                                             const Tolerance& tol = {}) {
  ConvergenceReport rep;
  if (seq.empty()) return rep;
  std::vector<Channel> chans;
  for (const auto& p : seq) {
    if (p.sys_dim() != seq.front().sys_dim()) throw PreconditionError("convergence_monitor: dimension mismatch");
    chans.push_back(phi_of(p, tol));
  }
  for (std::size_t i = 1; i < chans.size(); ++i) rep.distances.push_back(choi_distance(chans[i - 1], chans[i]));
  const std::size_t start = chans.size() < 2 ? 0 : std::min(chans.size() / 2, chans.size() - 2);
  for (std::size_t i = start; i < chans.size(); ++i)
    for (std::size_t j = i + 1; j < chans.size(); ++j)
      if (choi_distance(chans[i], chans[j]) > tol.abs_eps) rep.cauchy = false;
  return rep;
}

}  // namespace factdil

#endif  // FACTDIL_HIERARCHY_HPP
