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

// JSON config parsing for simulation grids, JSON-lines serialization of
// SimulationRecord and the plot-ready summary CSV.
//
// Config (see configs/simulation.schema.json):
//   {
//     "seed": 12345,                        // decimal u64, number or string
//     "replications": 10000,
//     "distributions": ["normal_distinct", "normal_identity",
//                       "poisson_distinct", "poisson_flat"],
//     "n": [25, 50, 100],
//     "p": [2, 3, 6],
//     "methods": ["P", "J", "O"],           // optional, default []
//     "o_sa_n_cap": 400                     // optional
//   }

#ifndef SPECANON_SIMULATION_IO_HPP_
#define SPECANON_SIMULATION_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "specanon/csv.hpp"
#include "specanon/errors.hpp"
#include "specanon/simulate.hpp"

namespace specanon {

inline std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t seed = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ParseError("seed must be a decimal 64-bit unsigned integer, got '" + text + "'");
  }
  return seed;
}

inline SimulationSpec parse_simulation_spec(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    static const std::vector<std::string> kKnown = {
        "seed", "replications", "distributions", "n", "p", "methods", "o_sa_n_cap", "description"};
    for (const auto& item : j.items()) {
      if (std::find(kKnown.begin(), kKnown.end(), item.key()) == kKnown.end()) {
        throw ParseError("unknown config key '" + item.key() + "'");
      }
    }
    SimulationSpec spec;
    const auto& seed = j.at("seed");
    if (seed.is_string()) {
      spec.seed = parse_seed(seed.get<std::string>());
    } else if (seed.is_number_unsigned()) {
      spec.seed = seed.get<std::uint64_t>();
    } else {
      throw ParseError("seed must be a non-negative integer");
    }
    spec.replications = j.at("replications").get<std::size_t>();
    for (const auto& d : j.at("distributions")) {
      spec.distributions.push_back(parse_distribution(d.get<std::string>()));
    }
    for (const auto& n : j.at("n")) spec.n_grid.push_back(n.get<Index>());
    for (const auto& p : j.at("p")) spec.p_grid.push_back(p.get<Index>());
    if (j.contains("methods")) {
      for (const auto& m : j.at("methods")) spec.methods.push_back(parse_variant(m.get<std::string>()));
    }
    if (j.contains("o_sa_n_cap")) spec.o_sa_n_cap = j.at("o_sa_n_cap").get<Index>();
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid simulation config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid simulation config: ") + e.what());
  }
}

inline SimulationSpec read_simulation_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_simulation_spec(j);
}

inline nlohmann::json to_json(const SimulationSpec& spec) {
  nlohmann::json j;
  j["seed"] = spec.seed;
  j["replications"] = spec.replications;
  j["distributions"] = nlohmann::json::array();
  for (auto d : spec.distributions) j["distributions"].push_back(std::string(distribution_name(d)));
  j["n"] = spec.n_grid;
  j["p"] = spec.p_grid;
  j["methods"] = nlohmann::json::array();
  for (auto m : spec.methods) j["methods"].push_back(std::string(variant_name(m)));
  j["o_sa_n_cap"] = spec.o_sa_n_cap;
  return j;
}

inline nlohmann::json to_json(const SimulationRecord& r) {
  nlohmann::json j;
  j["distribution"] = std::string(distribution_name(r.distribution));
  j["n"] = r.n;
  j["p"] = r.p;
  j["method"] = std::string(estimator_name(r.estimator));
  j["statistic"] = std::string(statistic_name(r.statistic));
  if (std::isfinite(r.relative_error)) {
    j["relative_error"] = r.relative_error;
  } else {
    j["relative_error"] = nullptr;
  }
  j["M"] = r.replications;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["status"] = std::string(status_name(r.status));
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

inline SimulationRecord record_from_json(const nlohmann::json& j) {
  SimulationRecord r;
  r.distribution = parse_distribution(j.at("distribution").get<std::string>());
  r.n = j.at("n").get<Index>();
  r.p = j.at("p").get<Index>();
  r.estimator = parse_estimator(j.at("method").get<std::string>());
  r.statistic = parse_statistic(j.at("statistic").get<std::string>());
  r.relative_error = j.at("relative_error").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                      : j.at("relative_error").get<double>();
  r.replications = j.at("M").get<std::size_t>();
  r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  const std::string status = j.at("status").get<std::string>();
  r.status = status == "ok"        ? RecordStatus::kOk
             : status == "skipped" ? RecordStatus::kSkipped
                                   : RecordStatus::kError;
  r.message = j.value("message", std::string());
  return r;
}

inline void write_jsonl(std::ostream& out, const std::vector<SimulationRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

// Columns: distribution,n,p,method,statistic,RE,M. RE is "NA" for skipped or
// failed cells.
inline void write_summary_csv(std::ostream& out, const std::vector<SimulationRecord>& records) {
  out << "distribution,n,p,method,statistic,RE,M\n";
  for (const auto& r : records) {
    out << distribution_name(r.distribution) << ',' << r.n << ',' << r.p << ','
        << estimator_name(r.estimator) << ',' << statistic_name(r.statistic) << ','
        << (r.status == RecordStatus::kOk ? csv::format_double(r.relative_error) : "NA") << ','
        << r.replications << '\n';
  }
}

}  // namespace specanon

#endif  // SPECANON_SIMULATION_IO_HPP_
