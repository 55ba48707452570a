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

// Dense-matrix helpers used by the anonymization algorithm and by the
// closed-form limiting covariances: vectorization, Kronecker products,
// commutation matrices, eigen square roots, centering and a thin SVD with a
// fixed sign convention.
//
// Vectorization is column-major throughout: entry (r, c) of a p x q matrix
// lands at position r + p * c of vec(A), 0-based.

#ifndef SPECANON_LINALG_HPP_
#define SPECANON_LINALG_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "specanon/errors.hpp"

namespace specanon {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// An n x p table of finite reals, one row per record and one column per
// variable, with optional column labels.
class DataMatrix {
 public:
  DataMatrix() = default;

  explicit DataMatrix(Matrix values, std::vector<std::string> names = {})
      : values_(std::move(values)), names_(std::move(names)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
      throw InvalidArgument("data matrix must have at least one row and one column");
    }
    if (!values_.allFinite()) {
      throw NonFiniteInput("data matrix contains NaN or infinite entries");
    }
    if (!names_.empty() && names_.size() != static_cast<std::size_t>(values_.cols())) {
      throw DimensionMismatch("number of column names (" + std::to_string(names_.size()) +
                              ") does not match number of columns (" +
                              std::to_string(values_.cols()) + ")");
    }
  }

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }
  const Matrix& values() const { return values_; }
  const std::vector<std::string>& names() const { return names_; }
  double operator()(Index row, Index col) const { return values_(row, col); }

  friend bool operator==(const DataMatrix& a, const DataMatrix& b) {
    return a.names_ == b.names_ && a.values_.rows() == b.values_.rows() &&
           a.values_.cols() == b.values_.cols() && a.values_ == b.values_;
  }

 private:
  Matrix values_;
  std::vector<std::string> names_;
};

namespace linalg {

inline double frobenius_norm(const Matrix& a) { return a.norm(); }

// Stacks the columns of `a`, first column first.
inline Vector vec(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// The pq x pq permutation matrix K with K * vec(A) = vec(A') for every
// p x q matrix A.
inline Matrix commutation_matrix(Index p, Index q) {
  if (p < 1 || q < 1) throw InvalidArgument("commutation_matrix: dimensions must be >= 1");
  Matrix k = Matrix::Zero(p * q, p * q);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < q; ++j) {
      // A(i, j) sits at i + p*j in vec(A) and at j + q*i in vec(A').
      k(j + q * i, i + p * j) = 1.0;
    }
  }
  return k;
}

// diag(vec(I_p)).
inline Matrix vp_matrix(Index p) {
  if (p < 1) throw InvalidArgument("vp_matrix: dimension must be >= 1");
  Matrix v = Matrix::Zero(p * p, p * p);
  for (Index k = 0; k < p; ++k) v(k + p * k, k + p * k) = 1.0;
  return v;
}

// Flips each column so that its largest-magnitude entry is positive; ties go
// to the lowest row index. Returns the applied signs.
inline Vector canonicalize_column_signs(Matrix& m) {
  Vector signs = Vector::Ones(m.cols());
  for (Index c = 0; c < m.cols(); ++c) {
    Index best = 0;
    for (Index r = 1; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > std::abs(m(best, c))) best = r;
    }
    if (m(best, c) < 0.0) {
      m.col(c) *= -1.0;
      signs(c) = -1.0;
    }
  }
  return signs;
}

inline void require_symmetric(const Matrix& s, double tol = 1e-10) {
  if (s.rows() != s.cols()) throw NotSymmetric("matrix is not square");
  if (!s.allFinite()) throw NonFiniteInput("matrix contains NaN or infinite entries");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol * scale) {
    throw NotSymmetric("matrix is not symmetric within tolerance");
  }
}

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // columns pair with `values`
};

// Eigendecomposition of a symmetric matrix with eigenvalues sorted in
// descending order and eigenvector signs fixed by canonicalize_column_signs.
inline SymmetricEigen symmetric_eigen(const Matrix& s) {
  require_symmetric(s);
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed to converge");
  const Index p = s.rows();
  SymmetricEigen out{Vector(p), Matrix(p, p)};
  for (Index k = 0; k < p; ++k) {
    out.values(k) = solver.eigenvalues()(p - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(p - 1 - k);
  }
  canonicalize_column_signs(out.vectors);
  return out;
}

// The non-symmetric square root O * Lambda^{1/2} built from the descending
// eigendecomposition Sigma = O Lambda O'. Eigenvalues in [-1e-12, 0) are
// clamped to zero; anything more negative is rejected.
inline Matrix eig_sqrt(const Matrix& sigma) {
  const SymmetricEigen eig = symmetric_eigen(sigma);
  const double scale = std::max(1.0, std::abs(eig.values(0)));
  Vector root(eig.values.size());
  for (Index k = 0; k < eig.values.size(); ++k) {
    const double lambda = eig.values(k);
    if (lambda < -1e-12 * scale) {
      throw NegativeEigenvalue("matrix has eigenvalue " + std::to_string(lambda) +
                               " below zero");
    }
    root(k) = std::sqrt(std::max(lambda, 0.0));
  }
  return eig.vectors * root.asDiagonal();
}

struct Centered {
  Matrix data;
  Vector mean;
};

// Column-mean subtraction; the n x n centering matrix is never formed.
inline Centered center(const Matrix& x) {
  Centered out;
  out.mean = x.colwise().mean().transpose();
  out.data = x.rowwise() - out.mean.transpose();
  return out;
}

inline Centered center(const DataMatrix& x) { return center(x.values()); }

struct ThinSvd {
  Matrix u;  // n x p, orthonormal columns summing to zero
  Vector d;  // p singular values, descending, >= 0
  Matrix v;  // p x p orthogonal
};

// Thin SVD of column-centered data. Requires n >= p + 1 so that p
// orthonormal directions orthogonal to the all-ones vector exist.
//
// Left singular vectors belonging to (numerically) zero singular values are
// not determined by the data; they are replaced by an orthonormal completion
// inside the complement of the all-ones vector so that every column of U
// still sums to zero.
inline ThinSvd thin_svd(const Matrix& xc) {
  const Index n = xc.rows();
  const Index p = xc.cols();
  if (n <= p) {
    throw TooFewRows("thin_svd needs more rows than columns (n = " + std::to_string(n) +
                     ", p = " + std::to_string(p) + ")");
  }
  if (!xc.allFinite()) throw NonFiniteInput("thin_svd input contains NaN or infinite entries");

  Eigen::JacobiSVD<Matrix> svd(xc, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ThinSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};

  const Vector signs = canonicalize_column_signs(out.v);
  out.u = out.u * signs.asDiagonal();

  const double cutoff =
      std::numeric_limits<double>::epsilon() * static_cast<double>(n) * out.d(0);
  const Vector ones_dir = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  Index next_unit = 0;
  for (Index k = 0; k < p; ++k) {
    if (out.d(k) > cutoff && out.d(k) > 0.0) continue;
    out.d(k) = 0.0;
    // Gram-Schmidt against 1 and the columns already fixed; fall back to
    // unit vectors when the current column is degenerate.
    Vector candidate = out.u.col(k);
    while (true) {
      for (int pass = 0; pass < 2; ++pass) {
        candidate -= ones_dir * ones_dir.dot(candidate);
        for (Index j = 0; j < k; ++j) candidate -= out.u.col(j) * out.u.col(j).dot(candidate);
      }
      const double norm = candidate.norm();
      if (norm > 1e-6) {
        out.u.col(k) = candidate / norm;
        break;
      }
      if (next_unit >= n) throw Error("thin_svd: could not complete orthonormal basis");
      candidate = Vector::Unit(n, next_unit++);
    }
  }
  return out;
}

inline ThinSvd thin_svd(const DataMatrix& xc) { return thin_svd(xc.values()); }

}  // namespace linalg
}  // namespace specanon

#endif  // SPECANON_LINALG_HPP_
