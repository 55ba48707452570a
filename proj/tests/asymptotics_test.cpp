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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "specanon/asymptotics.hpp"
#include "specanon/rng.hpp"
#include "specanon/sampling.hpp"

namespace specanon {
namespace {

Matrix diag(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v.asDiagonal();
}

// Gaussian fourth moments: Cov(s_ij, s_kl) = s_ik s_jl + s_il s_jk, with
// (r, c) at vec position r + p c.
Matrix gaussian_cov_of_vec_s(const Matrix& s) {
  const Index p = s.rows();
  Matrix out(p * p, p * p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j)
      for (Index k = 0; k < p; ++k)
        for (Index l = 0; l < p; ++l)
          out(i + p * j, k + p * l) = s(i, k) * s(j, l) + s(i, l) * s(j, k);
  return out;
}

// Anonymized limit for Sigma = diag(lambda): the diagonal blocks keep their
// variance, the cross terms double.
Matrix anonymized_diagonal_limit(const Vector& lambda) {
  const Index p = lambda.size();
  Matrix out = Matrix::Zero(p * p, p * p);
  for (Index i = 0; i < p; ++i) {
    out(i + p * i, i + p * i) = 2.0 * lambda(i) * lambda(i);
    for (Index j = 0; j < p; ++j) {
      if (i == j) continue;
      out(i + p * j, i + p * j) = 2.0 * lambda(i) * lambda(j);
      out(i + p * j, j + p * i) = 2.0 * lambda(i) * lambda(j);
    }
  }
  return out;
}

Matrix naive_kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

TEST(MeanLimitTest, Examples) {
  const GaussianSpec two_one(diag({2, 1}));
  EXPECT_EQ(mean_limit_cov(two_one, Estimator::kOriginal).matrix, diag({2, 1}));
  EXPECT_EQ(mean_limit_cov(two_one, Estimator::kPermutation).matrix, diag({2, 1}));
  EXPECT_EQ(mean_limit_cov(two_one, Estimator::kOrthogonal).matrix, diag({4, 2}));
  EXPECT_EQ(mean_limit_cov(GaussianSpec(Matrix::Identity(3, 3)), Estimator::kSignChange).matrix,
            Matrix(2.0 * Matrix::Identity(3, 3)));
}

TEST(CovLimitTest, TwoByTwoDiagonal) {
  const GaussianSpec spec(diag({2, 1}));
  Matrix anon(4, 4), orig(4, 4);
  anon << 8, 0, 0, 0, 0, 4, 4, 0, 0, 4, 4, 0, 0, 0, 0, 2;
  orig << 8, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2, 0, 0, 0, 0, 2;
  for (Estimator e : {Estimator::kPermutation, Estimator::kSignChange, Estimator::kOrthogonal}) {
    EXPECT_LT(max_abs_diff(cov_limit_cov(spec, e).matrix, anon), 1e-12);
  }
  EXPECT_LT(max_abs_diff(cov_limit_cov_original(spec).matrix, orig), 1e-12);
}

TEST(CovLimitTest, OriginalMatchesFourthMomentFormula) {
  for (Index p = 1; p <= 5; ++p) {
    RngStream rng(21, static_cast<std::uint64_t>(p));
    const Matrix b = gaussian_matrix(p, p + 3, rng);
    const Matrix sigma = b * b.transpose();
    const Matrix expected = gaussian_cov_of_vec_s(sigma);
    EXPECT_LT(max_abs_diff(cov_limit_cov_original(GaussianSpec(sigma)).matrix, expected),
              1e-10 * expected.cwiseAbs().maxCoeff());
  }
}

TEST(CovLimitTest, DiagonalPatternHigherDimensions) {
  for (const Vector& lambda : {Vector((Vector(3) << 5, 3, 1).finished()),
                               Vector((Vector(4) << 4, 3, 2, 1).finished())}) {
    const Matrix got = cov_limit_cov(GaussianSpec(Matrix(lambda.asDiagonal())), Estimator::kPermutation).matrix;
    EXPECT_LT(max_abs_diff(got, anonymized_diagonal_limit(lambda)), 1e-12);
  }
}

// Rotating Sigma rotates the limit: (O x O) M (O x O)'. The Haar draws carry
// arbitrary column signs, so this also covers sign-flip invariance.
TEST(CovLimitTest, RotationConjugation) {
  for (Index p = 2; p <= 4; ++p) {
    RngStream rng(22, static_cast<std::uint64_t>(p));
    const Matrix o = haar_orthogonal(static_cast<std::size_t>(p), rng);
    Vector lambda(p);
    for (Index k = 0; k < p; ++k) lambda(k) = static_cast<double>(2 * (p - k));
    const Matrix sigma = o * lambda.asDiagonal() * o.transpose();
    const Matrix oo = naive_kron(o, o);
    const Matrix expected = oo * anonymized_diagonal_limit(lambda) * oo.transpose();
    const Matrix got = cov_limit_cov(GaussianSpec(Matrix(0.5 * (sigma + sigma.transpose()))),
                                     Estimator::kSignChange)
                           .matrix;
    EXPECT_LT(max_abs_diff(got, expected), 1e-10 * expected.cwiseAbs().maxCoeff());
  }
}

TEST(CovLimitTest, SymmetricPositiveSemidefinite) {
  for (Index p = 1; p <= 5; ++p) {
    RngStream rng(23, static_cast<std::uint64_t>(p));
    const Matrix b = gaussian_matrix(p, p + 1, rng);
    const GaussianSpec spec(Matrix(b * b.transpose() + 0.1 * Matrix::Identity(p, p)));
    for (Estimator e : {Estimator::kOriginal, Estimator::kPermutation}) {
      const Matrix m = cov_limit_cov(spec, e).matrix;
      EXPECT_EQ(m, m.transpose());
      const double lo = Eigen::SelfAdjointEigenSolver<Matrix>(m).eigenvalues().minCoeff();
      EXPECT_GE(lo, -1e-9 * m.cwiseAbs().maxCoeff());
    }
  }
}

TEST(CovLimitTest, RepeatedEigenvaluesRejected) {
  const GaussianSpec identity(Matrix::Identity(2, 2));
  EXPECT_THROW(cov_limit_cov(identity, Estimator::kPermutation), AssumptionViolated);
  EXPECT_THROW(limit_cov(identity, Estimator::kOrthogonal, Statistic::kCovariance), AssumptionViolated);
  EXPECT_NO_THROW(cov_limit_cov(identity, Estimator::kOriginal));
  EXPECT_NO_THROW(limit_cov(identity, Estimator::kSignChange, Statistic::kMean));
}

TEST(GaussianSpecTest, Validation) {
  EXPECT_THROW(GaussianSpec(diag({1, -1})), InvalidArgument);
  EXPECT_THROW(GaussianSpec(Vector::Zero(3), diag({1, 2})), DimensionMismatch);
  Matrix asym(2, 2);
  asym << 2, 1, 0, 2;
  EXPECT_THROW(GaussianSpec{asym}, NotSymmetric);
}

TEST(AssumptionGapTest, Examples) {
  EXPECT_DOUBLE_EQ(assumption_gap(diag({2, 1})), 0.5);
  EXPECT_DOUBLE_EQ(assumption_gap(diag({5, 3, 1})), 0.4);
  EXPECT_EQ(assumption_gap(Matrix::Identity(3, 3)), 0.0);
  EXPECT_EQ(assumption_gap(diag({7})), std::numeric_limits<double>::infinity());
}

TEST(EfficiencyRatioTest, CrossTermsDouble) {
  for (const Vector& lambda : {Vector((Vector(2) << 2, 1).finished()),
                               Vector((Vector(3) << 5, 3, 1).finished())}) {
    const Index p = lambda.size();
    const Matrix r = efficiency_ratio(GaussianSpec(Matrix(lambda.asDiagonal())));
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) {
        const double expected = i == j ? 1.0 : 2.0;
        EXPECT_NEAR(r(i + p * j, i + p * j), expected, 1e-12);
        EXPECT_NEAR(r(i + p * j, j + p * i), expected, 1e-12);
      }
    }
    EXPECT_TRUE(std::isnan(r(1, 0)));
  }
  EXPECT_NEAR(efficiency_ratio(GaussianSpec(diag({3})))(0, 0), 1.0, 1e-12);
}

TEST(NamesTest, ParseEstimatorAndStatistic) {
  EXPECT_EQ(parse_estimator("original"), Estimator::kOriginal);
  EXPECT_EQ(parse_estimator("O"), Estimator::kOrthogonal);
  EXPECT_THROW(parse_estimator("Q"), InvalidArgument);
  EXPECT_EQ(parse_statistic("mean"), Statistic::kMean);
  EXPECT_THROW(parse_statistic("median"), InvalidArgument);
}

}  // namespace
}  // namespace specanon
