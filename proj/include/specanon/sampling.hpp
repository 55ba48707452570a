//
// Copyright 2026 The specanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Random transformation families: uniform permutations, uniform sign
// changes, Haar orthogonal matrices, and uniform points on the sphere.

#ifndef SPECANON_SAMPLING_HPP_
#define SPECANON_SAMPLING_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"
#include "specanon/rng.hpp"

namespace specanon {

// A bijection of {0, ..., n-1} standing in for an n x n permutation matrix P
// with P(i, mapping[i]) = 1, i.e. (P u)_i = u_{mapping[i]}.
struct PermutationVector {
  std::vector<std::size_t> mapping;

  std::size_t size() const { return mapping.size(); }

  Vector apply(const Vector& u) const {
    Vector out(u.size());
    for (std::size_t i = 0; i < mapping.size(); ++i) {
      out(static_cast<Index>(i)) = u(static_cast<Index>(mapping[i]));
    }
    return out;
  }

  // tr(P): number of fixed points.
  std::size_t trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < mapping.size(); ++i) t += mapping[i] == i;
    return t;
  }

  // tr(P^2): number of points lying on cycles of length one or two.
  std::size_t trace_of_square() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < mapping.size(); ++i) t += mapping[mapping[i]] == i;
    return t;
  }
};

// Diagonal of a sign-change matrix.
struct SignVector {
  std::vector<std::int8_t> signs;

  std::size_t size() const { return signs.size(); }

  Vector apply(const Vector& u) const {
    Vector out(u.size());
    for (std::size_t i = 0; i < signs.size(); ++i) {
      out(static_cast<Index>(i)) = signs[i] * u(static_cast<Index>(i));
    }
    return out;
  }

  long trace() const {
    long t = 0;
    for (auto s : signs) t += s;
    return t;
  }
};

// Uniform over all n! permutations (Fisher-Yates).
inline PermutationVector random_permutation(std::size_t n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("random_permutation: n must be >= 1");
  PermutationVector perm;
  perm.mapping.resize(n);
  std::iota(perm.mapping.begin(), perm.mapping.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm.mapping[i], perm.mapping[rng.index(i + 1)]);
  }
  return perm;
}

inline SignVector random_signs(std::size_t n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("random_signs: n must be >= 1");
  SignVector out;
  out.signs.resize(n);
  std::uint64_t bits = 0;
  int left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (left == 0) {
      bits = rng.next_u64();
      left = 64;
    }
    out.signs[i] = (bits & 1U) ? std::int8_t{1} : std::int8_t{-1};
    bits >>= 1;
    --left;
  }
  return out;
}

inline Matrix gaussian_matrix(Index rows, Index cols, RngStream& rng) {
  Matrix g(rows, cols);
  // Fill column by column so the draw order is fixed by the storage order.
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) g(r, c) = rng.normal();
  }
  return g;
}

// Haar-distributed n x n orthogonal matrix: QR of an i.i.d. standard
// Gaussian matrix, with the sign of each diagonal entry of R folded into the
// matching column of Q. Without that correction the result is not Haar.
inline Matrix haar_orthogonal(std::size_t n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("haar_orthogonal: n must be >= 1");
  const Index dim = static_cast<Index>(n);
  const Matrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& packed = qr.matrixQR();
  for (Index k = 0; k < dim; ++k) {
    if (packed(k, k) < 0.0) q.col(k) *= -1.0;
  }
  return q;
}

// Uniform on the unit sphere in R^n: a normalized standard Gaussian vector.
inline Vector uniform_sphere(std::size_t n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("uniform_sphere: n must be >= 1");
  Vector z(static_cast<Index>(n));
  double norm = 0.0;
  do {
    for (Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
    norm = z.norm();
  } while (norm == 0.0);
  return z / norm;
}

}  // namespace specanon

#endif  // SPECANON_SAMPLING_HPP_
