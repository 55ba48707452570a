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

// Monte Carlo harness measuring how fast the empirical covariance of the
// scaled mean and covariance statistics approaches the closed-form limits.
//
// One grid cell is (distribution, n, p, estimator). For each replication m
// the harness draws a dataset, optionally anonymizes it, and records
//   sqrt(n) (xbar - mu)          (length p)
//   sqrt(n) vec(S - Sigma)       (length p^2, S with divisor n)
// using the generating distribution's true mu and Sigma. Across the M
// replications it forms the empirical covariance (centered, divisor M - 1)
// and reports its relative Frobenius error against the Gaussian limit.
//
// Seeding: replication m of a cell uses cell_stream.substream(m); within it,
// substream(0) draws the data and substream(1) the anonymizing
// transformations. The cell stream depends only on (seed, distribution, n,
// p), so every estimator of a cell sees the same datasets.

#ifndef SPECANON_SIMULATE_HPP_
#define SPECANON_SIMULATE_HPP_

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "specanon/anonymize.hpp"
#include "specanon/asymptotics.hpp"
#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"
#include "specanon/rng.hpp"

namespace specanon {

enum class DistributionKind { kNormalDistinct, kNormalIdentity, kPoissonDistinct, kPoissonFlat };

inline std::string_view distribution_name(DistributionKind k) {
  switch (k) {
    case DistributionKind::kNormalDistinct: return "normal_distinct";
    case DistributionKind::kNormalIdentity: return "normal_identity";
    case DistributionKind::kPoissonDistinct: return "poisson_distinct";
    case DistributionKind::kPoissonFlat: return "poisson_flat";
  }
  return "?";
}

inline DistributionKind parse_distribution(std::string_view s) {
  if (s == "normal_distinct") return DistributionKind::kNormalDistinct;
  if (s == "normal_identity") return DistributionKind::kNormalIdentity;
  if (s == "poisson_distinct") return DistributionKind::kPoissonDistinct;
  if (s == "poisson_flat") return DistributionKind::kPoissonFlat;
  throw InvalidArgument("unknown distribution '" + std::string(s) + "'");
}

// normal_distinct   N_p((3,...,3), diag(p, p-1, ..., 1))
// normal_identity   N_p((3,...,3), I_p)
// poisson_distinct  independent Poisson(p, p-1, ..., 1) marginals
// poisson_flat      independent Poisson(1, ..., 1) marginals
struct DataDistribution {
  DistributionKind kind = DistributionKind::kNormalDistinct;
  Index p = 2;

  bool is_gaussian() const {
    return kind == DistributionKind::kNormalDistinct || kind == DistributionKind::kNormalIdentity;
  }

  bool has_distinct_eigenvalues() const {
    return kind == DistributionKind::kNormalDistinct || kind == DistributionKind::kPoissonDistinct;
  }

  // Marginal variances (the covariance is always diagonal).
  Vector variances() const {
    Vector v(p);
    for (Index k = 0; k < p; ++k) {
      v(k) = has_distinct_eigenvalues() ? static_cast<double>(p - k) : 1.0;
    }
    return v;
  }

  Vector true_mean() const { return is_gaussian() ? Vector::Constant(p, 3.0) : variances(); }
  Matrix true_covariance() const { return variances().asDiagonal(); }
};

inline DataMatrix generate(const DataDistribution& dist, Index n, RngStream& rng) {
  if (n < 1) throw InvalidArgument("generate: n must be >= 1");
  if (dist.p < 1) throw InvalidArgument("generate: p must be >= 1");
  const Index p = dist.p;
  Matrix x(n, p);
  if (dist.is_gaussian()) {
    const Vector mu = dist.true_mean();
    const Matrix root = linalg::eig_sqrt(dist.true_covariance());
    Vector z(p);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < p; ++k) z(k) = rng.normal();
      x.row(i) = (mu + root * z).transpose();
    }
  } else {
    const Vector rates = dist.variances();
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < p; ++k) x(i, k) = static_cast<double>(rng.poisson(rates(k)));
    }
  }
  return DataMatrix(std::move(x));
}

inline Vector sample_mean(const Matrix& x) { return x.colwise().mean().transpose(); }
inline Vector sample_mean(const DataMatrix& x) { return sample_mean(x.values()); }

// Sample covariance with divisor n.
inline Matrix sample_cov(const Matrix& x) {
  if (x.rows() < 2) throw TooFewRows("sample covariance needs at least two rows");
  const Matrix centered = x.rowwise() - x.colwise().mean();
  Matrix s = (centered.transpose() * centered) / static_cast<double>(x.rows());
  return 0.5 * (s + s.transpose());
}
inline Matrix sample_cov(const DataMatrix& x) { return sample_cov(x.values()); }

inline double relative_error(const Matrix& empirical, const Matrix& target) {
  if (empirical.rows() != target.rows() || empirical.cols() != target.cols()) {
    throw DimensionMismatch("relative_error: matrices differ in shape");
  }
  const double denom = target.norm();
  if (!(denom > 0.0)) throw ZeroTarget("relative_error: target has zero Frobenius norm");
  return (empirical - target).norm() / denom;
}

// Covariance of the rows of `samples` (one row per replication), centered at
// the sample mean with divisor M - 1. Sums run over rows in ascending order
// so the result does not depend on how the rows were produced.
inline Matrix empirical_covariance(const Matrix& samples) {
  const Index m = samples.rows();
  const Index q = samples.cols();
  if (m < 2) throw TooFewRows("empirical covariance needs at least two replications");
  Vector mean = Vector::Zero(q);
  for (Index r = 0; r < m; ++r) mean += samples.row(r).transpose();
  mean /= static_cast<double>(m);
  Matrix cov = Matrix::Zero(q, q);
  Vector d(q);
  for (Index r = 0; r < m; ++r) {
    d = samples.row(r).transpose() - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(m - 1);
  return 0.5 * (cov + cov.transpose());
}

inline Method method_for(Estimator e, OrthogonalMode o_mode = OrthogonalMode::kFast) {
  switch (e) {
    case Estimator::kPermutation: return {Variant::kPermutation, o_mode};
    case Estimator::kSignChange: return {Variant::kSignChange, o_mode};
    case Estimator::kOrthogonal: return {Variant::kOrthogonal, o_mode};
    case Estimator::kOriginal: break;
  }
  throw InvalidArgument("original data has no anonymization method");
}

inline Estimator estimator_for(Variant v) {
  switch (v) {
    case Variant::kPermutation: return Estimator::kPermutation;
    case Variant::kSignChange: return Estimator::kSignChange;
    case Variant::kOrthogonal: return Estimator::kOrthogonal;
  }
  return Estimator::kOriginal;
}

struct ReplicationOptions {
  OrthogonalMode o_mode = OrthogonalMode::kFast;
  unsigned parallelism = 1;
};

// Per-replication scaled statistics; row m belongs to replication m.
struct ReplicationStatistics {
  Matrix mean;        // M x p,   sqrt(n) (xbar - mu)
  Matrix covariance;  // M x p^2, sqrt(n) vec(S - Sigma)
};

inline ReplicationStatistics replicate(const DataDistribution& dist, Index n, Estimator estimator,
                                       std::size_t replications, const RngStream& cell_stream,
                                       const ReplicationOptions& options = {}) {
  const Index p = dist.p;
  const Vector mu = dist.true_mean();
  const Matrix sigma = dist.true_covariance();
  const double root_n = std::sqrt(static_cast<double>(n));
  const auto m_total = static_cast<Index>(replications);
  ReplicationStatistics out{Matrix(m_total, p), Matrix(m_total, p * p)};

  auto run_one = [&](Index m) {
    const RngStream rep = cell_stream.substream(static_cast<std::uint64_t>(m));
    RngStream data_rng = rep.substream(0);
    DataMatrix x = generate(dist, n, data_rng);
    if (is_anonymized(estimator)) {
      RngStream anon_rng = rep.substream(1);
      x = anonymize_data(x, method_for(estimator, options.o_mode), anon_rng);
    }
    out.mean.row(m) = (root_n * (sample_mean(x) - mu)).transpose();
    out.covariance.row(m) = (root_n * linalg::vec(sample_cov(x) - sigma)).transpose();
  };

  const unsigned workers =
      std::max(1U, std::min<unsigned>(options.parallelism, static_cast<unsigned>(replications)));
  if (workers == 1) {
    for (Index m = 0; m < m_total; ++m) run_one(m);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (Index m = w; m < m_total; m += workers) run_one(m);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

enum class RecordStatus { kOk, kSkipped, kError };

inline std::string_view status_name(RecordStatus s) {
  switch (s) {
    case RecordStatus::kOk: return "ok";
    case RecordStatus::kSkipped: return "skipped";
    case RecordStatus::kError: return "error";
  }
  return "?";
}

struct SimulationRecord {
  DistributionKind distribution = DistributionKind::kNormalDistinct;
  Index n = 0;
  Index p = 0;
  Estimator estimator = Estimator::kOriginal;
  Statistic statistic = Statistic::kMean;
  double relative_error = 0.0;  // NaN unless status is kOk
  std::size_t replications = 0;
  double elapsed_seconds = 0.0;
  RecordStatus status = RecordStatus::kOk;
  std::string message;
};

struct CellOptions {
  Index o_sa_n_cap = 400;
  OrthogonalMode o_mode = OrthogonalMode::kFast;
  unsigned parallelism = 1;
};

// Stream for the (distribution, n, p) cell under `seed`.
inline RngStream cell_stream(std::uint64_t seed, DistributionKind kind, Index n, Index p) {
  const std::uint64_t key = (static_cast<std::uint64_t>(kind) << 56) ^
                            (static_cast<std::uint64_t>(n) << 20) ^ static_cast<std::uint64_t>(p);
  return RngStream(seed, mix64(key));
}

// Targets: the Gaussian closed forms with the distribution's true Sigma, also
// for the Poisson and repeated-eigenvalue cells where they are not the true
// limits.
inline Matrix limit_target(const DataDistribution& dist, Estimator estimator, Statistic statistic) {
  const Matrix sigma = dist.true_covariance();
  if (statistic == Statistic::kMean) return mean_limit_cov(GaussianSpec(sigma), estimator).matrix;
  if (dist.has_distinct_eigenvalues()) return cov_limit_cov(GaussianSpec(sigma), estimator).matrix;
  return cov_limit_cov_unchecked(sigma, estimator);
}

// Returns the (mean, covariance) record pair of one cell.
inline std::array<SimulationRecord, 2> run_cell(const DataDistribution& dist, Index n,
                                                Estimator estimator, std::size_t replications,
                                                const RngStream& stream,
                                                const CellOptions& options = {}) {
  std::array<SimulationRecord, 2> records;
  records[0].statistic = Statistic::kMean;
  records[1].statistic = Statistic::kCovariance;
  for (auto& r : records) {
    r.distribution = dist.kind;
    r.n = n;
    r.p = dist.p;
    r.estimator = estimator;
    r.replications = replications;
    r.relative_error = std::numeric_limits<double>::quiet_NaN();
  }
  if (estimator == Estimator::kOrthogonal && n > options.o_sa_n_cap) {
    for (auto& r : records) {
      r.status = RecordStatus::kSkipped;
      r.message = "orthogonal anonymization skipped for n > " + std::to_string(options.o_sa_n_cap);
    }
    return records;
  }
  if (replications < 2) throw InvalidArgument("run_cell: need at least two replications");
  if (n <= dist.p) throw TooFewRows("run_cell: n must be at least p + 1");

  const auto start = std::chrono::steady_clock::now();
  const ReplicationStatistics stats =
      replicate(dist, n, estimator, replications, stream, {options.o_mode, options.parallelism});
  records[0].relative_error = relative_error(empirical_covariance(stats.mean),
                                             limit_target(dist, estimator, Statistic::kMean));
  records[1].relative_error = relative_error(empirical_covariance(stats.covariance),
                                             limit_target(dist, estimator, Statistic::kCovariance));
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : records) r.elapsed_seconds = elapsed;
  return records;
}

struct SimulationSpec {
  std::vector<DistributionKind> distributions;
  std::vector<Index> n_grid;
  std::vector<Index> p_grid;
  std::vector<Variant> methods;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  Index o_sa_n_cap = 400;

  void validate() const {
    if (replications < 2) throw InvalidArgument("replications must be >= 2");
    if (distributions.empty()) throw InvalidArgument("no distributions configured");
    if (n_grid.empty() || p_grid.empty()) throw InvalidArgument("n and p grids must be nonempty");
    const Index max_p = *std::max_element(p_grid.begin(), p_grid.end());
    if (*std::min_element(p_grid.begin(), p_grid.end()) < 1) {
      throw InvalidArgument("p values must be >= 1");
    }
    for (Index n : n_grid) {
      if (n < max_p + 1) {
        throw InvalidArgument("every n must be at least max(p) + 1 (got n = " + std::to_string(n) +
                              ")");
      }
    }
  }
};

// A cell of the grid, in the order run_grid visits them.
struct GridCell {
  DistributionKind distribution;
  Index n;
  Index p;
  Estimator estimator;
};

// Lexicographic in (distribution, n, p, estimator) following the order of
// the configured lists; "original" always precedes the configured methods.
inline std::vector<GridCell> grid_cells(const SimulationSpec& spec) {
  std::vector<Estimator> estimators{Estimator::kOriginal};
  for (Variant v : spec.methods) estimators.push_back(estimator_for(v));
  std::vector<GridCell> cells;
  for (DistributionKind d : spec.distributions) {
    for (Index n : spec.n_grid) {
      for (Index p : spec.p_grid) {
        for (Estimator e : estimators) cells.push_back({d, n, p, e});
      }
    }
  }
  return cells;
}

struct GridHooks {
  // Returns previously completed records for a cell, if any.
  std::function<std::optional<std::array<SimulationRecord, 2>>(const GridCell&)> restore;
  std::function<void(const std::array<SimulationRecord, 2>&)> on_cell_complete;
};

inline std::vector<SimulationRecord> run_grid(const SimulationSpec& spec, unsigned parallelism = 1,
                                              const GridHooks& hooks = {}) {
  spec.validate();
  std::vector<SimulationRecord> out;
  for (const GridCell& cell : grid_cells(spec)) {
    std::optional<std::array<SimulationRecord, 2>> pair;
    if (hooks.restore) pair = hooks.restore(cell);
    if (!pair) {
      const DataDistribution dist{cell.distribution, cell.p};
      const CellOptions options{spec.o_sa_n_cap, OrthogonalMode::kFast, parallelism};
      try {
        pair = run_cell(dist, cell.n, cell.estimator, spec.replications,
                        cell_stream(spec.seed, cell.distribution, cell.n, cell.p), options);
      } catch (const std::exception& e) {
        std::array<SimulationRecord, 2> failed;
        failed[0].statistic = Statistic::kMean;
        failed[1].statistic = Statistic::kCovariance;
        for (auto& r : failed) {
          r.distribution = cell.distribution;
          r.n = cell.n;
          r.p = cell.p;
          r.estimator = cell.estimator;
          r.replications = spec.replications;
          r.relative_error = std::numeric_limits<double>::quiet_NaN();
          r.status = RecordStatus::kError;
          r.message = e.what();
        }
        pair = failed;
      }
      if (hooks.on_cell_complete) hooks.on_cell_complete(*pair);
    }
    out.insert(out.end(), pair->begin(), pair->end());
  }
  return out;
}

}  // namespace specanon

#endif  // SPECANON_SIMULATE_HPP_
