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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "specanon/cli/commands.hpp"
#include "specanon/specanon.hpp"

namespace specanon {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("specanon_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_data(const std::string& name, Index n, Index p, std::uint64_t stream) {
    RngStream rng(61, stream);
    std::ofstream out(path(name));
    csv::write(out, generate({DistributionKind::kNormalDistinct, p}, n, rng));
    return path(name);
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  static int run_binary(const std::string& args) {
    const std::string cmd = std::string(SPECANON_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

TEST_F(CliTest, AnonymizePreservesMeans) {
  const std::string in = write_data("x.csv", 100, 3, 1);
  cli::AnonymizeOptions opts;
  opts.input = in;
  opts.output = path("y.csv");
  opts.seed = 5;
  std::ostringstream out, diag;
  ASSERT_EQ(cli::run_anonymize(opts, out, diag), 0) << diag.str();
  const DataMatrix x = csv::read_file(in), y = csv::read_file(opts.output);
  EXPECT_EQ(y.rows(), 100);
  EXPECT_EQ(y.names(), x.names());
  EXPECT_LT((sample_mean(y) - sample_mean(x)).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NE(diag.str().find("seed=5"), std::string::npos);
  EXPECT_NE(diag.str().find("singular_values="), std::string::npos);
}

TEST_F(CliTest, AnonymizeIsReproducible) {
  const std::string in = write_data("x.csv", 40, 2, 2);
  for (const char* method : {"p", "j", "o"}) {
    cli::AnonymizeOptions opts;
    opts.input = in;
    opts.method = method;
    opts.seed = 17;
    std::ostringstream a, b, diag;
    ASSERT_EQ(cli::run_anonymize(opts, a, diag), 0);
    ASSERT_EQ(cli::run_anonymize(opts, b, diag), 0);
    EXPECT_EQ(a.str(), b.str());
  }
}

TEST_F(CliTest, AnonymizeErrors) {
  {
    std::ofstream out(path("bad.csv"));
    out << "a,b\n1,2\n3,oops\n4,5\n";
  }
  cli::AnonymizeOptions opts;
  opts.input = path("bad.csv");
  opts.seed = 1;
  std::ostringstream out, diag;
  EXPECT_EQ(cli::run_anonymize(opts, out, diag), 2);
  EXPECT_NE(diag.str().find("row 3, column 2"), std::string::npos) << diag.str();

  opts.input = write_data("square.csv", 3, 3, 3);
  EXPECT_EQ(cli::run_anonymize(opts, out, diag), 3);

  opts.input = write_data("ok.csv", 10, 2, 4);
  opts.method = "z";
  EXPECT_EQ(cli::run_anonymize(opts, out, diag), 2);
}

TEST_F(CliTest, TheoryOutputs) {
  cli::TheoryOptions opts;
  opts.diag = "2,1";
  opts.estimator = "j";
  opts.statistic = "mean";
  std::ostringstream out, diag;
  ASSERT_EQ(cli::run_theory(opts, out, diag), 0);
  EXPECT_EQ(csv::parse_matrix(out.str()), Matrix((Matrix(2, 2) << 4, 0, 0, 2).finished()));
  EXPECT_NE(diag.str().find("assumption_gap=0.5"), std::string::npos);

  opts.statistic = "covariance";
  opts.format = "jsonl";
  opts.diag.clear();
  opts.sigma_inline = "2,0;0,1";
  std::ostringstream json_out;
  ASSERT_EQ(cli::run_theory(opts, json_out, diag), 0);
  const auto j = nlohmann::json::parse(json_out.str());
  EXPECT_NEAR(j["matrix"][1][2].get<double>(), 4.0, 1e-12);
  EXPECT_EQ(j["estimator"], "J");
}

TEST_F(CliTest, TheoryErrors) {
  std::ostringstream out, diag;
  cli::TheoryOptions identity;
  identity.diag = "1,1";
  EXPECT_EQ(cli::run_theory(identity, out, diag), 4);
  identity.estimator = "original";
  EXPECT_EQ(cli::run_theory(identity, out, diag), 0);
  EXPECT_NE(diag.str().find("warning"), std::string::npos);

  cli::TheoryOptions asym;
  asym.sigma_inline = "2,1;0,2";
  EXPECT_EQ(cli::run_theory(asym, out, diag), 2);
  cli::TheoryOptions indefinite;
  indefinite.sigma_inline = "1,2;2,1";
  EXPECT_EQ(cli::run_theory(indefinite, out, diag), 2);
  cli::TheoryOptions none;
  EXPECT_EQ(cli::run_theory(none, out, diag), 2);
}

std::string write_config(const std::string& file, const std::string& body) {
  std::ofstream(file) << body;
  return file;
}

TEST_F(CliTest, SimulateMinimalGrid) {
  cli::SimulateOptions opts;
  opts.config = write_config(path("c.json"),
                             R"({"seed": 3, "replications": 10, "distributions": ["normal_distinct"],)"
                             R"( "n": [20], "p": [2], "methods": []})");
  opts.output = path("out.jsonl");
  std::ostringstream out, diag;
  ASSERT_EQ(cli::run_simulate(opts, out, diag), 0) << diag.str();
  std::ifstream in(opts.output);
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), 2U);
  EXPECT_EQ(lines[0]["statistic"], "mean");
  EXPECT_EQ(lines[1]["statistic"], "covariance");
  EXPECT_EQ(lines[0]["M"], 10);
  const std::string summary = slurp(path("out.csv"));
  EXPECT_EQ(summary.rfind("distribution,n,p,method,statistic,RE,M\n", 0), 0U);
  EXPECT_FALSE(fs::exists(cli::progress_path_for(opts)));

  ASSERT_EQ(cli::run_simulate(opts, out, diag), 0);
  EXPECT_EQ(summary, slurp(path("out.csv")));
  std::ifstream rerun(opts.output);
  for (auto& expected : lines) {
    std::string line;
    ASSERT_TRUE(std::getline(rerun, line));
    auto got = nlohmann::json::parse(line);
    got.erase("elapsed_seconds");
    expected.erase("elapsed_seconds");
    EXPECT_EQ(got, expected);
  }
}

TEST_F(CliTest, SimulateResumesFromProgress) {
  cli::SimulateOptions opts;
  opts.config = write_config(path("c.json"),
                             R"({"seed": 3, "replications": 10, "distributions": ["normal_distinct"],)"
                             R"( "n": [20], "p": [2], "methods": ["P"]})");
  opts.output = path("out.jsonl");
  SimulationRecord mean, cov;
  mean.distribution = cov.distribution = DistributionKind::kNormalDistinct;
  mean.n = cov.n = 20;
  mean.p = cov.p = 2;
  mean.replications = cov.replications = 10;
  mean.relative_error = 0.125;
  cov.relative_error = 0.375;
  cov.statistic = Statistic::kCovariance;
  {
    std::ofstream progress(cli::progress_path_for(opts));
    write_jsonl(progress, {mean, cov});
    progress << "{\"torn";
  }
  std::ostringstream out, diag;
  ASSERT_EQ(cli::run_simulate(opts, out, diag), 0) << diag.str();
  EXPECT_NE(diag.str().find("resuming: 1 completed"), std::string::npos) << diag.str();
  std::ifstream in(opts.output);
  std::vector<nlohmann::json> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(lines.size(), 4U);
  EXPECT_EQ(lines[0]["relative_error"].get<double>(), 0.125);
  EXPECT_EQ(lines[1]["relative_error"].get<double>(), 0.375);
  EXPECT_EQ(lines[2]["method"], "P");

  opts.resume = false;
  {
    std::ofstream progress(cli::progress_path_for(opts));
    write_jsonl(progress, {mean, cov});
  }
  ASSERT_EQ(cli::run_simulate(opts, out, diag), 0);
  std::ifstream again(opts.output);
  std::string line;
  std::getline(again, line);
  EXPECT_NE(nlohmann::json::parse(line)["relative_error"].get<double>(), 0.125);
}

TEST_F(CliTest, SimulateRejectsBadConfig) {
  cli::SimulateOptions opts;
  opts.output = path("out.jsonl");
  std::ostringstream out, diag;
  opts.config = write_config(path("a.json"), R"({"seed": 1, "replications": 10, "distributions": ["normal_distinct"], "n": [2], "p": [2]})");
  EXPECT_EQ(cli::run_simulate(opts, out, diag), 2);
  opts.config = write_config(path("b.json"), R"({"seed": 1, "replications": 10, "distributions": ["cauchy"], "n": [20], "p": [2]})");
  EXPECT_EQ(cli::run_simulate(opts, out, diag), 2);
  opts.config = write_config(path("c.json"), R"({"seed": 1, "replications": 10, "distributions": ["normal_distinct"], "n": [20], "p": [2], "extra": 1})");
  EXPECT_EQ(cli::run_simulate(opts, out, diag), 2);
  opts.config = write_config(path("d.json"), "{not json");
  EXPECT_EQ(cli::run_simulate(opts, out, diag), 2);
}

TEST_F(CliTest, BundledConfigsParse) {
  const SimulationSpec grid = read_simulation_spec(std::string(SPECANON_CONFIG_DIR) + "/paper-grid.json");
  const auto cells = grid_cells(grid);
  EXPECT_EQ(cells.size(), 4U * 7 * 3 * 4);
  std::size_t capped = 0;
  for (const auto& c : cells) capped += c.estimator == Estimator::kOrthogonal && c.n > grid.o_sa_n_cap;
  EXPECT_EQ(capped, 4U * 2 * 3);
  const DataDistribution dist{DistributionKind::kNormalDistinct, 2};
  const auto skipped = run_cell(dist, 800, Estimator::kOrthogonal, grid.replications,
                                cell_stream(grid.seed, dist.kind, 800, 2), {grid.o_sa_n_cap});
  EXPECT_EQ(skipped[0].status, RecordStatus::kSkipped);
  EXPECT_NO_THROW(read_simulation_spec(std::string(SPECANON_CONFIG_DIR) + "/smoke.json"));
}

TEST_F(CliTest, PrivacyReports) {
  const std::string x = write_data("x.csv", 60, 2, 7);
  cli::PrivacyOptions opts;
  opts.original = x;
  opts.anonymized = x;
  std::ostringstream out, diag;
  ASSERT_EQ(cli::run_privacy(opts, out, diag), 0);
  auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["match_proportion"].get<double>(), 1.0);
  EXPECT_EQ(j["delta"].get<double>(), 1e-6);
  EXPECT_FALSE(j.contains("min_distances"));

  cli::AnonymizeOptions anon;
  anon.input = x;
  anon.output = path("o.csv");
  anon.method = "o";
  anon.seed = 9;
  ASSERT_EQ(cli::run_anonymize(anon, out, diag), 0);
  opts.anonymized = anon.output;
  opts.include_distances = true;
  std::ostringstream out2;
  ASSERT_EQ(cli::run_privacy(opts, out2, diag), 0);
  j = nlohmann::json::parse(out2.str());
  EXPECT_EQ(j["match_proportion"].get<double>(), 0.0);
  EXPECT_EQ(j["min_distances"].size(), 60U);

  opts.anonymized = write_data("wide.csv", 60, 3, 8);
  EXPECT_EQ(cli::run_privacy(opts, out, diag), 6);
  opts.anonymized = path("missing.csv");
  EXPECT_EQ(cli::run_privacy(opts, out, diag), 2);
}

TEST_F(CliTest, BinaryExitCodes) {
  EXPECT_EQ(run_binary("theory --diag 2,1 --method p"), 0);
  EXPECT_EQ(run_binary("theory --diag 1,1 --method p"), 4);
  EXPECT_EQ(run_binary("theory --diag 2,1 --bogus"), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  const std::string x = write_data("x.csv", 30, 2, 9);
  const std::string y = path("y.csv");
  EXPECT_EQ(run_binary("anonymize " + x + " --method j --seed 4 --output " + y), 0);
  EXPECT_EQ(run_binary("anonymize " + x + " --seed notanumber"), 2);
  EXPECT_EQ(run_binary("privacy " + x + " " + y), 0);
  EXPECT_EQ(run_binary("privacy " + x + " " + write_data("w.csv", 30, 3, 10)), 6);
}

}  // namespace
}  // namespace specanon
