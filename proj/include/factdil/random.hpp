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

#ifndef FACTDIL_RANDOM_HPP
#define FACTDIL_RANDOM_HPP

#include <cstdint>
#include <random>

#include "factdil/matcore.hpp"

namespace factdil {

/// Seeded generator. `split()` derives an independent child stream, so a
/// batch of trials can be reproduced one by one from the parent seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed), engine_(mix(seed)) {}

  Rng split() { return Rng(mix(state_ += 0x9E3779B97F4A7C15ULL)); }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  // splitmix64 finaliser
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Complex Ginibre matrix with standard normal real and imaginary parts.
inline Matrix ginibre(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix g(rows, cols);
  for (auto& z : g.entries()) {
    const double re = rng.normal();
    const double im = rng.normal();
    z = cplx(re, im);
  }
  return g;
}

inline Matrix haar_unitary(Rng& rng, std::size_t n) {
  return orthonormalize_columns(ginibre(rng, n, n));
}

/// GUE-style Hermitian matrix (g + g*) / 2.
inline Matrix random_hermitian(Rng& rng, std::size_t n) {
  const Matrix g = ginibre(rng, n, n);
  return (g + g.adjoint()) * cplx(0.5);
}

/// Point in the open probability simplex (flat Dirichlet with a small
/// floor on each coordinate so every weight stays strictly positive).
inline std::vector<double> random_simplex_point(Rng& rng, std::size_t n) {
  std::vector<double> w(n);
  double s = 0.0;
  for (auto& x : w) {
    x = 1e-3 - std::log1p(-rng.uniform());
    s += x;
  }
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace factdil

#endif  // FACTDIL_RANDOM_HPP
