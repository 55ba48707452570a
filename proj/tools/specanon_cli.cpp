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

// specanon: spectral anonymization, limiting covariances, Monte Carlo
// convergence grids and record-linkage privacy checks.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "specanon/cli/commands.hpp"
#include "specanon/simulation_io.hpp"

namespace {

// CLI11 reads integers through stoll-like parsing; take the seed as text so
// the full unsigned 64-bit range is accepted.
std::optional<std::uint64_t> seed_from(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return specanon::parse_seed(text);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace specanon::cli;

  CLI::App app{"Spectral anonymization of numeric tables"};
  app.require_subcommand(1);

  AnonymizeOptions anon;
  std::string anon_seed;
  auto* anonymize = app.add_subcommand("anonymize", "Anonymize a numeric CSV file");
  anonymize->add_option("input", anon.input, "Input CSV with header row")->required();
  anonymize->add_option("--method", anon.method, "p, j or o")
      ->check(CLI::IsMember({"p", "j", "o", "P", "J", "O"}))
      ->capture_default_str();
  anonymize->add_option("--o-mode", anon.o_mode, "fast or literal (method o only)")
      ->check(CLI::IsMember({"fast", "literal"}))
      ->capture_default_str();
  anonymize->add_option("--seed", anon_seed, "Decimal u64 seed (default: from entropy)");
  anonymize->add_option("--output,-o", anon.output, "Output CSV (default: stdout)");

  TheoryOptions theory;
  auto* theory_cmd = app.add_subcommand("theory", "Print a closed-form limiting covariance");
  theory_cmd->add_option("--sigma", theory.sigma_path, "File holding Sigma as headerless CSV");
  theory_cmd->add_option("--sigma-inline", theory.sigma_inline, "Sigma inline, e.g. \"2,0;0,1\"");
  theory_cmd->add_option("--diag", theory.diag, "Diagonal Sigma, e.g. \"2,1\"");
  theory_cmd->add_option("--estimator,--method", theory.estimator, "original, p, j or o")
      ->capture_default_str();
  theory_cmd->add_option("--statistic", theory.statistic, "mean or covariance")
      ->capture_default_str();
  theory_cmd->add_option("--format", theory.format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  theory_cmd->add_option("--output,-o", theory.output, "Output file (default: stdout)");

  SimulateOptions sim;
  std::string sim_seed;
  bool no_resume = false;
  sim.parallelism = std::max(1U, std::thread::hardware_concurrency());
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo convergence grid");
  simulate->add_option("config", sim.config, "JSON simulation config")->required();
  simulate->add_option("--output,-o", sim.output, "JSON-lines records file")->required();
  simulate->add_option("--summary", sim.summary, "Summary CSV (default: output with .csv)");
  simulate->add_option("--parallelism,-j", sim.parallelism, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Override the config seed (decimal u64)");
  simulate->add_flag("--no-resume", no_resume, "Ignore completion markers of a previous run");

  PrivacyOptions priv;
  auto* privacy = app.add_subcommand("privacy", "Distance-based record linkage report");
  privacy->add_option("original", priv.original, "Original CSV")->required();
  privacy->add_option("anonymized", priv.anonymized, "Anonymized CSV")->required();
  privacy->add_option("--delta", priv.delta, "Match tolerance")->capture_default_str();
  privacy->add_option("--output,-o", priv.output, "Output JSON (default: stdout)");
  privacy->add_flag("--per-row", priv.include_distances, "Include per-row minimum distances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*anonymize) {
      anon.seed = seed_from(anon_seed);
      return run_anonymize(anon, std::cout, std::cerr);
    }
    if (*theory_cmd) return run_theory(theory, std::cout, std::cerr);
    if (*simulate) {
      sim.seed = seed_from(sim_seed);
      sim.resume = !no_resume;
      return run_simulate(sim, std::cout, std::cerr);
    }
    if (*privacy) return run_privacy(priv, std::cout, std::cerr);
  } catch (const specanon::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitFailure;
}
