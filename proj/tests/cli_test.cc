// Copyright 2026 The ldpcount Authors
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


#include "cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_split.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"

namespace ldpcount::cli {
namespace {

using ::testing::HasSubstr;
using ::testing::StartsWith;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome RunCli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::filesystem::path TempPath(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(::testing::TempDir()) / "ldpcount_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::vector<std::string> Lines(const std::string& text) {
  return absl::StrSplit(text, '\n', absl::SkipEmpty());
}

TEST(CliTest, SimulateMeanWritesCsvWithBaseline) {
  const Outcome o = RunCli({"simulate-mean", "--epsilon", "0.5,1", "--n",
                            "2000", "--t", "2", "--trials", "3", "--seed",
                            "5", "--baseline", "laplace"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const std::vector<std::string> lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_THAT(lines[0], StartsWith("# config: simulate-mean "));
  EXPECT_THAT(lines[0], HasSubstr("--seed 5"));
  EXPECT_EQ(lines[1],
            "mechanism,epsilon,gamma,n,d_or_s,trials,mean_error,std_error");
  EXPECT_THAT(lines[2], StartsWith("1BitRRPM,0.5,0,2000,4320,3,"));
  EXPECT_THAT(lines[3], StartsWith("Laplace,0.5,0,2000,4320,3,"));
  EXPECT_THAT(lines[4], StartsWith("1BitRRPM,1,0,2000,4320,3,"));
  EXPECT_THAT(lines[5], StartsWith("Laplace,1,0,2000,4320,3,"));
}

TEST(CliTest, SimulateMeanIsDeterministic) {
  const std::vector<std::string> args = {
      "simulate-mean", "--epsilon", "1",   "--gamma",  "0,0.2",
      "--n",           "3000",      "--t", "3",        "--trials",
      "4",             "--seed",    "11",  "--population", "uniform"};
  const Outcome a = RunCli(args);
  const Outcome b = RunCli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::vector<std::string> other_seed = args;
  other_seed[12] = "12";
  EXPECT_NE(RunCli(other_seed).out, a.out);
}

TEST(CliTest, OutputFilesAreByteIdenticalAcrossRuns) {
  const auto csv_a = TempPath("a.csv");
  const auto csv_b = TempPath("b.csv");
  const auto json_a = TempPath("a.json");
  const auto json_b = TempPath("b.json");
  for (const auto& [csv, json] : {std::pair{csv_a, json_a},
                                  std::pair{csv_b, json_b}}) {
    const Outcome o = RunCli({"simulate-hist", "--epsilon", "1", "--n",
                              "2000", "--d", "1,4", "--trials", "3",
                              "--population", "uniform", "--keep-trials",
                              "--out", csv.string(), "--json", json.string()});
    ASSERT_EQ(o.code, kExitOk) << o.err;
    EXPECT_TRUE(o.out.empty());
  }
  EXPECT_EQ(ReadFile(csv_a), ReadFile(csv_b));
  EXPECT_EQ(ReadFile(json_a), ReadFile(json_b));
  const nlohmann::json doc = nlohmann::json::parse(ReadFile(json_a));
  ASSERT_EQ(doc["results"].size(), 2u);
  EXPECT_EQ(doc["results"][1]["d_or_s"], 4);
  EXPECT_EQ(doc["results"][0]["trial_errors"].size(), 3u);
}

TEST(CliTest, SimulateHistSweepsD) {
  const Outcome o = RunCli({"simulate-hist", "--epsilon", "2", "--gamma",
                            "0,0.1", "--n", "1000", "--d", "1,2", "--k", "8",
                            "--trials", "2", "--population", "uniform"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const std::vector<std::string> lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_THAT(lines[2], StartsWith("dBitFlipPM,2,0,1000,1,2,"));
  EXPECT_THAT(lines[3], StartsWith("dBitFlipPM,2,0,1000,2,2,"));
  EXPECT_THAT(lines[5], StartsWith("dBitFlipPM,2,0.1,1000,2,2,"));
}

TEST(CliTest, ValidationErrorsExitTwo) {
  Outcome o = RunCli({"simulate-mean", "--epsilon", "1", "--gamma", "0.6"});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_THAT(o.err, HasSubstr("gamma < 0.5"));

  o = RunCli({"simulate-mean", "--epsilon", "1", "--s", "7"});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_THAT(o.err, HasSubstr("s must divide m"));

  o = RunCli({"simulate-hist", "--epsilon", "1", "--k", "32", "--d", "64"});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_THAT(o.err, HasSubstr("d <= k"));

  o = RunCli({"simulate-mean", "--epsilon", "0"});
  EXPECT_EQ(o.code, kExitValidation);

  o = RunCli({"simulate-mean", "--epsilon", "1", "--mechanism", "1BitMean",
              "--gamma", "0.1"});
  EXPECT_EQ(o.code, kExitValidation);

  o = RunCli({"simulate-mean", "--epsilon", "1", "--population", "zipf:1"});
  EXPECT_EQ(o.code, kExitValidation);

  EXPECT_EQ(RunCli({"no-such-command"}).code, kExitValidation);
  EXPECT_EQ(RunCli({"simulate-mean", "--bogus-flag"}).code, kExitValidation);
  EXPECT_EQ(RunCli({}).code, kExitValidation);
}

TEST(CliTest, HelpExitsZero) {
  const Outcome o = RunCli({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_THAT(o.out + o.err, HasSubstr("simulate-mean"));
}

TEST(CliTest, IoFailuresExitOne) {
  Outcome o = RunCli({"simulate-mean", "--epsilon", "1", "--n", "10",
                      "--trials", "1", "--out",
                      "/nonexistent-dir/result.csv"});
  EXPECT_EQ(o.code, kExitIo);
  EXPECT_THAT(o.err, HasSubstr("/nonexistent-dir/result.csv"));

  o = RunCli({"patterns", "--trace", "/nonexistent-dir/trace.csv"});
  EXPECT_EQ(o.code, kExitIo);
}

std::filesystem::path WriteTrace(const std::string& name,
                                 const std::string& contents) {
  const auto path = TempPath(name);
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

TEST(CliTest, PatternsOnConstantTrace) {
  std::string trace = "user_id,t,value_seconds\n";
  for (int user = 0; user < 10; ++user) {
    for (int t = 1; t <= 5; ++t) {
      trace += "u" + std::to_string(user) + "," + std::to_string(t) +
               ",43200\n";
    }
  }
  const auto path = WriteTrace("constant.csv", trace);
  const Outcome o = RunCli({"patterns", "--trace", path.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const std::vector<std::string> lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_THAT(lines[0], StartsWith("# config: patterns --trace "));
  EXPECT_EQ(lines[1], "pattern_rank,support,cumulative_user_fraction");
  EXPECT_EQ(lines[2], "1,10,1.000000");
}

TEST(CliTest, PatternsRejectsMalformedTraceLine) {
  const auto path = WriteTrace("bad.csv",
                               "user_id,t,value_seconds\n"
                               "u1,1,100\n"
                               "u1,2,not-a-number\n");
  const Outcome o = RunCli({"patterns", "--trace", path.string()});
  EXPECT_EQ(o.code, kExitValidation);
  EXPECT_THAT(o.err, HasSubstr("line 3"));
}

TEST(CliTest, PatternSupportsSumToN) {
  const Outcome o =
      RunCli({"patterns", "--population", "uniform", "--n", "500", "--t", "6",
              "--s", "21600", "--seed", "3"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const std::vector<std::string> lines = Lines(o.out);
  ASSERT_GE(lines.size(), 3u);
  int64_t total = 0;
  for (size_t i = 2; i < lines.size(); ++i) {
    const std::vector<std::string> fields = absl::StrSplit(lines[i], ',');
    ASSERT_EQ(fields.size(), 3u);
    total += std::stoll(fields[1]);
  }
  EXPECT_EQ(total, 500);
  EXPECT_THAT(lines.back(), HasSubstr(",1.000000"));
  EXPECT_EQ(RunCli({"patterns", "--population", "uniform", "--n", "500",
                    "--t", "6", "--s", "21600", "--seed", "3"})
                .out,
            o.out);
}

TEST(CliTest, PatternsNeedsExactlyOneSource) {
  EXPECT_EQ(RunCli({"patterns"}).code, kExitValidation);
  EXPECT_EQ(RunCli({"patterns", "--population", "uniform", "--trace", "x"})
                .code,
            kExitValidation);
}

TEST(CliTest, AccountingTable) {
  const Outcome o = RunCli(
      {"accounting", "--epsilon", "0.686,1", "--gamma", "0,0.2"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const std::vector<std::string> lines = Lines(o.out);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "epsilon,gamma,epsilon_prime,multiapp_epsilon");
  EXPECT_EQ(lines[1], "0.6860,0.0000,0.6860,1.6718");
  EXPECT_EQ(lines[3], "1.0000,0.0000,1.0000,2.7183");
  EXPECT_THAT(lines[4], StartsWith("1.0000,0.2000,0.5694,"));
}

TEST(CliTest, AccountingRejectsInvalidGamma) {
  EXPECT_EQ(RunCli({"accounting", "--epsilon", "1", "--gamma", "0.5"}).code,
            kExitValidation);
}

}  // namespace
}  // namespace ldpcount::cli
