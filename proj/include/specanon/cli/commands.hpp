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

// Subcommand implementations behind the `specanon` executable. Each command
// takes a plain options struct plus an output stream (primary results when no
// --output path is given) and a diagnostic stream (effective configuration,
// warnings, errors), and returns the process exit code.
//
// Exit codes:
//   0  success
//   1  unexpected failure (I/O and the like)
//   2  parse error in a file, flag value or config
//   3  too few rows for spectral anonymization (n <= p)
//   4  distinct-eigenvalue assumption violated
//   5  every simulation cell failed
//   6  dimension mismatch between datasets

#ifndef SPECANON_CLI_COMMANDS_HPP_
#define SPECANON_CLI_COMMANDS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "specanon/anonymize.hpp"
#include "specanon/asymptotics.hpp"
#include "specanon/csv.hpp"
#include "specanon/errors.hpp"
#include "specanon/privacy.hpp"
#include "specanon/rng.hpp"
#include "specanon/simulate.hpp"
#include "specanon/simulation_io.hpp"

namespace specanon::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitTooFewRows = 3,
  kExitAssumption = 4,
  kExitAllCellsFailed = 5,
  kExitDimensionMismatch = 6,
};

inline std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Writes via a sibling temporary file and a rename, so readers never see a
// partially written file.
inline void write_atomically(const std::filesystem::path& path,
                             const std::function<void(std::ostream&)>& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) throw Error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline void emit(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
  } else {
    write_atomically(path, body);
  }
}

// Runs `body`, translating library errors into exit codes.
inline int guarded(std::ostream& diag, const char* command, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    diag << command << ": parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const TooFewRows& e) {
    diag << command << ": " << e.what() << '\n';
    return kExitTooFewRows;
  } catch (const AssumptionViolated& e) {
    diag << command << ": " << e.what() << '\n';
    return kExitAssumption;
  } catch (const DimensionMismatch& e) {
    diag << command << ": " << e.what() << '\n';
    return kExitDimensionMismatch;
  } catch (const std::exception& e) {
    diag << command << ": error: " << e.what() << '\n';
    return kExitFailure;
  }
}

struct AnonymizeOptions {
  std::string input;
  std::string output;  // empty or "-" writes to the output stream
  std::string method = "p";
  std::string o_mode = "fast";
  std::optional<std::uint64_t> seed;  // drawn from entropy when absent
};

inline int run_anonymize(const AnonymizeOptions& opts, std::ostream& out, std::ostream& diag) {
  return guarded(diag, "anonymize", [&] {
    Method method;
    try {
      method = Method{parse_variant(opts.method), parse_o_mode(opts.o_mode)};
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what());
    }
    const std::uint64_t seed = opts.seed.value_or(entropy_seed());
    diag << "anonymize: input=" << opts.input << " method=" << variant_name(method.variant)
         << " o_mode=" << o_mode_name(method.o_mode) << " seed=" << seed
         << " output=" << (opts.output.empty() ? "-" : opts.output) << '\n';

    const DataMatrix data = csv::read_file(opts.input);
    const SpectralModel model = fit_spectral(data);
    diag << "singular_values=";
    for (Index k = 0; k < model.singular_values.size(); ++k) {
      diag << (k ? "," : "") << csv::format_double(model.singular_values(k));
    }
    diag << '\n';

    RngStream rng(seed);
    const DataMatrix result = anonymize(model, method, rng);
    emit(opts.output, out, [&](std::ostream& os) { csv::write(os, result); });
    return static_cast<int>(kExitOk);
  });
}

struct TheoryOptions {
  std::string sigma_path;    // headerless CSV matrix
  std::string sigma_inline;  // "2,0;0,1"
  std::string diag;          // "2,1" -> diag(2, 1)
  std::string estimator = "P";
  std::string statistic = "covariance";
  std::string format = "csv";  // csv | jsonl
  std::string output;
};

inline Matrix theory_sigma(const TheoryOptions& opts) {
  const int given = !opts.sigma_path.empty() + !opts.sigma_inline.empty() + !opts.diag.empty();
  if (given != 1) throw ParseError("exactly one of --sigma, --sigma-inline, --diag is required");
  if (!opts.diag.empty()) {
    const Matrix d = csv::parse_matrix(opts.diag);
    if (d.rows() != 1) throw ParseError("--diag expects a single comma-separated row");
    return d.row(0).transpose().asDiagonal();
  }
  if (!opts.sigma_inline.empty()) return csv::parse_matrix(opts.sigma_inline);
  std::ifstream in(opts.sigma_path);
  if (!in) throw ParseError("cannot open '" + opts.sigma_path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return csv::parse_matrix(buf.str());
}

inline int run_theory(const TheoryOptions& opts, std::ostream& out, std::ostream& diag) {
  return guarded(diag, "theory", [&] {
    Estimator estimator;
    Statistic statistic;
    try {
      estimator = parse_estimator(opts.estimator);
      statistic = parse_statistic(opts.statistic);
      if (opts.format != "csv" && opts.format != "jsonl") {
        throw InvalidArgument("unknown format '" + opts.format + "'");
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what());
    }
    const Matrix sigma = theory_sigma(opts);
    std::optional<GaussianSpec> spec;
    try {
      spec.emplace(sigma);
    } catch (const Error& e) {
      throw ParseError(std::string("Sigma must be a symmetric positive definite matrix: ") +
                       e.what());
    }
    const double gap = assumption_gap(sigma);
    diag << "theory: p=" << sigma.rows() << " estimator=" << estimator_name(estimator)
         << " statistic=" << statistic_name(statistic) << " format=" << opts.format
         << " output=" << (opts.output.empty() ? "-" : opts.output) << '\n';
    diag << "assumption_gap=" << csv::format_double(gap) << '\n';
    if (statistic == Statistic::kCovariance && !is_anonymized(estimator) &&
        !(gap > kAssumptionGapTolerance)) {
      diag << "warning: Sigma has repeated eigenvalues; the anonymized-data limit would not "
              "apply\n";
    }

    const LimitCov limit = limit_cov(*spec, estimator, statistic);
    emit(opts.output, out, [&](std::ostream& os) {
      if (opts.format == "csv") {
        csv::write_rows(os, limit.matrix);
        return;
      }
      nlohmann::json j;
      j["statistic"] = std::string(statistic_name(statistic));
      j["estimator"] = std::string(estimator_name(estimator));
      j["assumption_gap"] = std::isfinite(gap) ? nlohmann::json(gap) : nlohmann::json(nullptr);
      j["matrix"] = nlohmann::json::array();
      for (Index i = 0; i < limit.matrix.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Index c = 0; c < limit.matrix.cols(); ++c) row.push_back(limit.matrix(i, c));
        j["matrix"].push_back(row);
      }
      os << j.dump() << '\n';
    });
    return static_cast<int>(kExitOk);
  });
}

struct SimulateOptions {
  std::string config;
  std::string output;   // JSON-lines records
  std::string summary;  // CSV summary; defaults to `output` with extension .csv
  unsigned parallelism = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  bool resume = true;
};

inline std::string summary_path_for(const SimulateOptions& opts) {
  if (!opts.summary.empty()) return opts.summary;
  std::filesystem::path p(opts.output);
  p.replace_extension(".csv");
  if (p == std::filesystem::path(opts.output)) p += ".summary.csv";
  return p.string();
}

// Progress file: one JSON record per line, appended as cells finish. It is
// the completion marker used to resume an interrupted run and is removed
// once the final outputs are in place.
inline std::string progress_path_for(const SimulateOptions& opts) { return opts.output + ".progress"; }

inline int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& diag) {
  return guarded(diag, "simulate", [&] {
    if (opts.output.empty()) throw ParseError("--output is required for simulate");
    SimulationSpec spec = read_simulation_spec(opts.config);
    if (opts.seed) spec.seed = *opts.seed;
    const std::string summary = summary_path_for(opts);
    const std::string progress = progress_path_for(opts);
    diag << "simulate: config=" << opts.config << " output=" << opts.output
         << " summary=" << summary << " parallelism=" << opts.parallelism
         << " resume=" << (opts.resume ? "true" : "false") << '\n';
    diag << "effective_config=" << to_json(spec).dump() << '\n';

    using Key = std::tuple<DistributionKind, Index, Index, Estimator>;
    std::map<Key, std::array<SimulationRecord, 2>> done;
    if (opts.resume && std::filesystem::exists(progress)) {
      std::ifstream in(progress);
      std::string line;
      std::map<Key, std::vector<SimulationRecord>> partial;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
          const SimulationRecord r = record_from_json(nlohmann::json::parse(line));
          if (r.replications != spec.replications) continue;
          partial[{r.distribution, r.n, r.p, r.estimator}].push_back(r);
        } catch (const std::exception&) {
          // A torn final line from an interrupted run; the cell is recomputed.
        }
      }
      for (auto& [key, recs] : partial) {
        if (recs.size() == 2 && recs[0].statistic == Statistic::kMean &&
            recs[1].statistic == Statistic::kCovariance) {
          done[key] = {recs[0], recs[1]};
        }
      }
      diag << "resuming: " << done.size() << " completed cells found in " << progress << '\n';
    } else {
      std::filesystem::remove(progress);
    }

    std::ofstream progress_out(progress, std::ios::app);
    GridHooks hooks;
    hooks.restore = [&](const GridCell& c) -> std::optional<std::array<SimulationRecord, 2>> {
      auto it = done.find({c.distribution, c.n, c.p, c.estimator});
      if (it == done.end()) return std::nullopt;
      return it->second;
    };
    hooks.on_cell_complete = [&](const std::array<SimulationRecord, 2>& pair) {
      for (const auto& r : pair) progress_out << to_json(r).dump() << '\n';
      progress_out.flush();
      const auto& r = pair[1];
      diag << "cell " << distribution_name(r.distribution) << " n=" << r.n << " p=" << r.p
           << " method=" << estimator_name(r.estimator) << " status=" << status_name(r.status)
           << '\n';
    };

    const std::vector<SimulationRecord> records = run_grid(spec, opts.parallelism, hooks);
    progress_out.close();

    write_atomically(opts.output, [&](std::ostream& os) { write_jsonl(os, records); });
    write_atomically(summary, [&](std::ostream& os) { write_summary_csv(os, records); });
    std::filesystem::remove(progress);
    out << "wrote " << records.size() << " records to " << opts.output << " and " << summary
        << '\n';

    const bool any_completed = std::any_of(records.begin(), records.end(), [](const auto& r) {
      return r.status != RecordStatus::kError;
    });
    return static_cast<int>(any_completed ? kExitOk : kExitAllCellsFailed);
  });
}

struct PrivacyOptions {
  std::string original;
  std::string anonymized;
  double delta = kDefaultMatchDelta;
  std::string output;
  bool include_distances = false;
};

inline int run_privacy(const PrivacyOptions& opts, std::ostream& out, std::ostream& diag) {
  return guarded(diag, "privacy", [&] {
    diag << "privacy: original=" << opts.original << " anonymized=" << opts.anonymized
         << " delta=" << csv::format_double(opts.delta)
         << " per_row=" << (opts.include_distances ? "true" : "false")
         << " output=" << (opts.output.empty() ? "-" : opts.output) << '\n';
    if (!(opts.delta > 0.0)) throw ParseError("--delta must be positive");
    const DataMatrix orig = csv::read_file(opts.original);
    const DataMatrix anon = csv::read_file(opts.anonymized);
    const PrivacyReport report = privacy_report(anon, orig, opts.delta);

    nlohmann::json j;
    j["n"] = anon.rows();
    j["p"] = anon.cols();
    j["delta"] = report.delta;
    j["mean_distance"] = report.mean_distance;
    j["match_proportion"] = report.match_proportion;
    if (opts.include_distances) {
      j["min_distances"] = std::vector<double>(
          report.min_distances.data(), report.min_distances.data() + report.min_distances.size());
    }
    emit(opts.output, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
    return static_cast<int>(kExitOk);
  });
}

}  // namespace specanon::cli

#endif  // SPECANON_CLI_COMMANDS_HPP_
