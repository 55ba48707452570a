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

// Closed-form limiting covariances for Gaussian data N_p(mu, Sigma).
//
// Sample mean:  sqrt(n)(xbar - mu) -> N(0, c Sigma), with c = 1 for the
// original data and for permutation anonymization (the two means coincide)
// and c = 2 for sign-change and orthogonal anonymization.
//
// Sample covariance (divisor n), with R = eig_sqrt(Sigma):
//   original:    (R x R)(I + K)(R x R)'
//   anonymized:  (R x R)(2I + 2K - 2V)(R x R)'
// where K is the (p, p) commutation matrix and V = diag(vec(I_p)). The
// anonymized form only holds when Sigma has distinct eigenvalues.
//
// p^2-dimensional objects use column-major vec indexing: the (r, c) entry of
// a p x p matrix sits at position r + p * c.

#ifndef SPECANON_ASYMPTOTICS_HPP_
#define SPECANON_ASYMPTOTICS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>

#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"

namespace specanon {

enum class Estimator { kOriginal, kPermutation, kSignChange, kOrthogonal };
enum class Statistic { kMean, kCovariance };

inline bool is_anonymized(Estimator e) { return e != Estimator::kOriginal; }

inline std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::kOriginal: return "original";
    case Estimator::kPermutation: return "P";
    case Estimator::kSignChange: return "J";
    case Estimator::kOrthogonal: return "O";
  }
  return "?";
}

inline Estimator parse_estimator(std::string_view s) {
  if (s == "original") return Estimator::kOriginal;
  if (s == "p" || s == "P") return Estimator::kPermutation;
  if (s == "j" || s == "J") return Estimator::kSignChange;
  if (s == "o" || s == "O") return Estimator::kOrthogonal;
  throw InvalidArgument("unknown estimator '" + std::string(s) + "'");
}

inline std::string_view statistic_name(Statistic s) {
  return s == Statistic::kMean ? "mean" : "covariance";
}

inline Statistic parse_statistic(std::string_view s) {
  if (s == "mean") return Statistic::kMean;
  if (s == "covariance" || s == "cov") return Statistic::kCovariance;
  throw InvalidArgument("unknown statistic '" + std::string(s) + "'");
}

// Relative eigen-gap below which the anonymized covariance limit is refused.
inline constexpr double kAssumptionGapTolerance = 1e-8;

struct GaussianSpec {
  Vector mean;
  Matrix covariance;

  GaussianSpec(Vector mu, Matrix sigma) : mean(std::move(mu)), covariance(std::move(sigma)) {
    linalg::require_symmetric(covariance);
    if (mean.size() != covariance.rows()) {
      throw DimensionMismatch("mean length does not match covariance dimension");
    }
    const linalg::SymmetricEigen eig = linalg::symmetric_eigen(covariance);
    if (!(eig.values(eig.values.size() - 1) > 0.0)) {
      throw InvalidArgument("covariance matrix must be positive definite");
    }
  }

  // Zero mean; the limits never depend on mu.
  explicit GaussianSpec(const Matrix& sigma) : GaussianSpec(Vector::Zero(sigma.rows()), sigma) {}

  Index dim() const { return covariance.rows(); }
};

struct LimitCov {
  Statistic statistic;
  Estimator estimator;
  Matrix matrix;
};

inline LimitCov mean_limit_cov(const GaussianSpec& spec, Estimator estimator) {
  const bool doubled =
      estimator == Estimator::kSignChange || estimator == Estimator::kOrthogonal;
  return {Statistic::kMean, estimator, (doubled ? 2.0 : 1.0) * spec.covariance};
}

// Smallest relative gap between adjacent sorted eigenvalues,
// min_k (lambda_k - lambda_{k+1}) / lambda_1. Zero flags repeated eigenvalues.
// For p = 1 there are no pairs and the gap is +infinity.
inline double assumption_gap(const Matrix& sigma) {
  const linalg::SymmetricEigen eig = linalg::symmetric_eigen(sigma);
  if (eig.values.size() < 2) return std::numeric_limits<double>::infinity();
  if (!(eig.values(0) > 0.0)) return 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (Index k = 0; k + 1 < eig.values.size(); ++k) {
    gap = std::min(gap, (eig.values(k) - eig.values(k + 1)) / eig.values(0));
  }
  return std::max(gap, 0.0);
}

// Evaluates the sandwich formula without checking the eigen-gap. The
// simulation harness uses this for cells that deliberately violate the
// distinct-eigenvalue condition.
inline Matrix cov_limit_cov_unchecked(const Matrix& sigma, Estimator estimator) {
  const Index p = sigma.rows();
  const Matrix root = linalg::eig_sqrt(sigma);
  const Matrix outer = linalg::kron(root, root);
  const Matrix identity = Matrix::Identity(p * p, p * p);
  const Matrix commutation = linalg::commutation_matrix(p, p);
  const Matrix middle = is_anonymized(estimator)
                            ? Matrix(2.0 * identity + 2.0 * commutation - 2.0 * linalg::vp_matrix(p))
                            : Matrix(identity + commutation);
  Matrix out = outer * middle * outer.transpose();
  return 0.5 * (out + out.transpose());
}

inline LimitCov cov_limit_cov(const GaussianSpec& spec, Estimator estimator) {
  if (is_anonymized(estimator)) {
    const double gap = assumption_gap(spec.covariance);
    if (!(gap > kAssumptionGapTolerance)) {
      throw AssumptionViolated(
          "covariance limit for anonymized data requires distinct eigenvalues of Sigma "
          "(relative eigen-gap " +
          std::to_string(gap) + " <= " + std::to_string(kAssumptionGapTolerance) + ")");
    }
  }
  return {Statistic::kCovariance, estimator, cov_limit_cov_unchecked(spec.covariance, estimator)};
}

inline LimitCov cov_limit_cov_original(const GaussianSpec& spec) {
  return cov_limit_cov(spec, Estimator::kOriginal);
}

inline LimitCov limit_cov(const GaussianSpec& spec, Estimator estimator, Statistic statistic) {
  return statistic == Statistic::kMean ? mean_limit_cov(spec, estimator)
                                       : cov_limit_cov(spec, estimator);
}

// Entrywise ratio anonymized / original of the covariance limits. Entries
// whose original-data limit is zero (below 1e-12 of the largest entry) have
// no defined ratio and are set to NaN.
inline Matrix efficiency_ratio(const GaussianSpec& spec) {
  const Matrix anon = cov_limit_cov(spec, Estimator::kPermutation).matrix;
  const Matrix orig = cov_limit_cov(spec, Estimator::kOriginal).matrix;
  const double floor = 1e-12 * orig.cwiseAbs().maxCoeff();
  Matrix ratio(orig.rows(), orig.cols());
  for (Index i = 0; i < orig.rows(); ++i) {
    for (Index j = 0; j < orig.cols(); ++j) {
      ratio(i, j) = std::abs(orig(i, j)) > floor ? anon(i, j) / orig(i, j)
                                                 : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return ratio;
}

}  // namespace specanon

#endif  // SPECANON_ASYMPTOTICS_HPP_
