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

// Spectral anonymization.
//
// The data X (n x p) is centered and decomposed as X - 1 xbar' = U D V'.
// Each column u_k of U is then perturbed independently by a random
// transformation T_k, giving U0 = (T_1 u_1 | ... | T_p u_p), and the
// anonymized data is U0 D V' + 1 xbar'. Three transformation families are
// supported:
//
//   kPermutation  T_k uniform over permutation matrices
//   kSignChange   T_k uniform over diagonal +-1 matrices
//   kOrthogonal   T_k Haar over the orthogonal group
//
// For kOrthogonal, T_k u_k is uniform on the unit sphere whatever the unit
// vector u_k is, so the fast mode draws that point directly in O(n) instead
// of building an n x n Haar matrix. The literal mode builds the matrix.

#ifndef SPECANON_ANONYMIZE_HPP_
#define SPECANON_ANONYMIZE_HPP_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"
#include "specanon/rng.hpp"
#include "specanon/sampling.hpp"

namespace specanon {

struct SpectralModel {
  Vector mean;             // column means of the source data
  Matrix left_vectors;     // U, n x p
  Vector singular_values;  // diagonal of D, descending
  Matrix right_vectors;    // V, p x p
  std::vector<std::string> names;

  Index rows() const { return left_vectors.rows(); }
  Index cols() const { return left_vectors.cols(); }

  // U0 D V' + 1 mean'.
  Matrix compose(const Matrix& left) const {
    Matrix out = left * singular_values.asDiagonal() * right_vectors.transpose();
    out.rowwise() += mean.transpose();
    return out;
  }

  Matrix reconstruct() const { return compose(left_vectors); }
};

enum class Variant { kPermutation, kSignChange, kOrthogonal };
enum class OrthogonalMode { kFast, kLiteral };

struct Method {
  Variant variant = Variant::kPermutation;
  OrthogonalMode o_mode = OrthogonalMode::kFast;

  friend bool operator==(const Method&, const Method&) = default;
};

inline std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kPermutation: return "P";
    case Variant::kSignChange: return "J";
    case Variant::kOrthogonal: return "O";
  }
  return "?";
}

// Accepts "p"/"P", "j"/"J", "o"/"O".
inline Variant parse_variant(std::string_view s) {
  if (s == "p" || s == "P") return Variant::kPermutation;
  if (s == "j" || s == "J") return Variant::kSignChange;
  if (s == "o" || s == "O") return Variant::kOrthogonal;
  throw InvalidArgument("unknown anonymization method '" + std::string(s) + "'");
}

inline std::string_view o_mode_name(OrthogonalMode m) {
  return m == OrthogonalMode::kFast ? "fast" : "literal";
}

inline OrthogonalMode parse_o_mode(std::string_view s) {
  if (s == "fast") return OrthogonalMode::kFast;
  if (s == "literal") return OrthogonalMode::kLiteral;
  throw InvalidArgument("unknown orthogonal mode '" + std::string(s) + "'");
}

inline SpectralModel fit_spectral(const DataMatrix& x) {
  if (x.rows() <= x.cols()) {
    throw TooFewRows("spectral anonymization needs n >= p + 1 rows (n = " +
                     std::to_string(x.rows()) + ", p = " + std::to_string(x.cols()) + ")");
  }
  linalg::Centered centered = linalg::center(x);
  linalg::ThinSvd svd = linalg::thin_svd(centered.data);
  return SpectralModel{std::move(centered.mean), std::move(svd.u), std::move(svd.d),
                       std::move(svd.v), x.names()};
}

// Maps (column index k, u_k) to the perturbed column. Production code uses
// the random transformations below; tests inject fixed ones.
using ColumnTransform = std::function<Vector(Index, const Vector&)>;

inline DataMatrix anonymize(const SpectralModel& model, const ColumnTransform& transform) {
  Matrix left(model.rows(), model.cols());
  for (Index k = 0; k < model.cols(); ++k) {
    Vector column = transform(k, model.left_vectors.col(k));
    if (column.size() != model.rows()) {
      throw DimensionMismatch("column transform changed the column length");
    }
    left.col(k) = column;
  }
  return DataMatrix(model.compose(left), model.names);
}

// Perturbs one left singular vector with a fresh draw from `rng`.
inline Vector perturb_column(const Vector& u, const Method& method, RngStream& rng) {
  const auto n = static_cast<std::size_t>(u.size());
  switch (method.variant) {
    case Variant::kPermutation:
      return random_permutation(n, rng).apply(u);
    case Variant::kSignChange:
      return random_signs(n, rng).apply(u);
    case Variant::kOrthogonal:
      if (method.o_mode == OrthogonalMode::kLiteral) return haar_orthogonal(n, rng) * u;
      return uniform_sphere(n, rng);
  }
  throw InvalidArgument("unknown anonymization variant");
}

// Columns are perturbed in order k = 0, ..., p-1, each with an independent
// transformation drawn from `rng`.
inline DataMatrix anonymize(const SpectralModel& model, const Method& method, RngStream& rng) {
  return anonymize(model, [&](Index, const Vector& u) { return perturb_column(u, method, rng); });
}

inline DataMatrix anonymize_data(const DataMatrix& x, const Method& method, RngStream& rng) {
  return anonymize(fit_spectral(x), method, rng);
}

}  // namespace specanon

#endif  // SPECANON_ANONYMIZE_HPP_
