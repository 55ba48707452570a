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

// Distance-based record linkage: for each anonymized record, the Euclidean
// distance to the closest original record, on the raw data scale.

#ifndef SPECANON_PRIVACY_HPP_
#define SPECANON_PRIVACY_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "specanon/errors.hpp"
#include "specanon/linalg.hpp"

namespace specanon {

inline constexpr double kDefaultMatchDelta = 1e-6;

// Entry i is min_j ||anon_i - orig_j||_2. Brute-force scan.
inline Vector linkage_distances(const Matrix& anon, const Matrix& orig) {
  if (anon.cols() != orig.cols()) {
    throw DimensionMismatch("linkage_distances: datasets have different numbers of columns");
  }
  if (anon.rows() != orig.rows()) {
    throw DimensionMismatch("linkage_distances: datasets have different numbers of rows");
  }
  const Index p = anon.cols();
  Vector out(anon.rows());
  for (Index i = 0; i < anon.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < orig.rows(); ++j) {
      double sq = 0.0;
      for (Index k = 0; k < p; ++k) {
        const double diff = anon(i, k) - orig(j, k);
        sq += diff * diff;
      }
      if (sq < best) best = sq;
    }
    out(i) = std::sqrt(best);
  }
  return out;
}

inline Vector linkage_distances(const DataMatrix& anon, const DataMatrix& orig) {
  return linkage_distances(anon.values(), orig.values());
}

struct PrivacyReport {
  Vector min_distances;
  double mean_distance = 0.0;
  double match_proportion = 0.0;  // share of min_distances strictly below delta
  double delta = kDefaultMatchDelta;
};

inline PrivacyReport privacy_report(const DataMatrix& anon, const DataMatrix& orig,
                                    double delta = kDefaultMatchDelta) {
  if (!(delta > 0.0)) throw InvalidArgument("privacy_report: delta must be positive");
  PrivacyReport report;
  report.delta = delta;
  report.min_distances = linkage_distances(anon, orig);
  const auto n = static_cast<double>(report.min_distances.size());
  report.mean_distance = report.min_distances.mean();
  std::size_t matches = 0;
  for (Index i = 0; i < report.min_distances.size(); ++i) {
    if (report.min_distances(i) < delta) ++matches;
  }
  report.match_proportion = static_cast<double>(matches) / n;
  return report;
}

struct PrivacyAggregate {
  double mean_euc = 0.0;  // average over datasets of each report's mean distance
  double bin_width = 0.0;
  // histogram[b] counts reports whose match proportion falls in
  // [b * bin_width, (b + 1) * bin_width).
  std::vector<std::size_t> histogram;
};

// Default bin width is 1 / n of the first report, i.e. one bin per possible
// match count.
inline PrivacyAggregate aggregate_privacy(const std::vector<PrivacyReport>& reports,
                                          std::optional<double> bin_width = std::nullopt) {
  if (reports.empty()) throw EmptyInput("aggregate_privacy: no reports");
  PrivacyAggregate agg;
  agg.bin_width = bin_width.value_or(1.0 / static_cast<double>(reports.front().min_distances.size()));
  if (!(agg.bin_width > 0.0) || agg.bin_width > 1.0) {
    throw InvalidArgument("aggregate_privacy: bin width must be in (0, 1]");
  }
  // The slack keeps proportions k/n from falling into bin k - 1 by rounding.
  auto bin_of = [&](double proportion) {
    return static_cast<std::size_t>(std::floor(proportion / agg.bin_width + 1e-9));
  };
  agg.histogram.assign(bin_of(1.0) + 1, 0);
  double total = 0.0;
  for (const PrivacyReport& r : reports) {
    total += r.mean_distance;
    ++agg.histogram[bin_of(r.match_proportion)];
  }
  agg.mean_euc = total / static_cast<double>(reports.size());
  return agg;
}

}  // namespace specanon

#endif  // SPECANON_PRIVACY_HPP_
