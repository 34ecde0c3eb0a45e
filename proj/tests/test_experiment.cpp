// Copyright 2026 The uspn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "uspn/experiment.hpp"

using namespace uspn;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("uspn_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(const fs::path& dir, std::vector<int> N_list = {32, 64}) {
  ExperimentConfig c;
  c.product = {parse_function_spec("triangle:0.9")};
  c.methods = {ExperimentMethod::monte_carlo, ExperimentMethod::contour, ExperimentMethod::closed_form,
               ExperimentMethod::determinantal};
  c.N_list = std::move(N_list);
  c.samples = 4000;
  c.seed = 20260101;
  c.output_dir = dir.string();
  c.name = "demo";
  return c;
}

int count_method(const ExperimentOutcome& o, const std::string& prefix) {
  int n = 0;
  for (const auto& r : o.rows) n += r.method.rfind(prefix, 0) == 0;
  return n;
}

}  // namespace

TEST(FunctionSpec, ParsesTheThreeFamilies) {
  const auto t = parse_function_spec("triangle:0.9");
  EXPECT_EQ(t.profile().kind(), ProfileKind::triangle);
  EXPECT_DOUBLE_EQ(t.sigma(), 0.9);
  const auto r = parse_function_spec("raised_cosine:1.2");
  EXPECT_EQ(r.profile().kind(), ProfileKind::raised_cosine);
  const auto p = parse_function_spec("piecewise_polynomial:1.5:1,0.5");
  EXPECT_EQ(p.profile().kind(), ProfileKind::piecewise_polynomial);
  ASSERT_EQ(p.profile().coefficients().size(), 2u);
  EXPECT_DOUBLE_EQ(p.profile().coefficients()[1], 0.5);
}

TEST(FunctionSpec, RejectsMalformedInput) {
  EXPECT_THROW(parse_function_spec("triangle"), ConfigError);
  EXPECT_THROW(parse_function_spec("gaussian:1"), ConfigError);
  EXPECT_THROW(parse_function_spec("triangle:abc"), ConfigError);
  EXPECT_THROW(parse_function_spec("triangle:-1"), ConfigError);
}

TEST(Config, JsonRoundTrip) {
  auto c = small_config(fs::temp_directory_path());
  c.lemmas.push_back({1, {}, {}});
  c.methods.push_back(ExperimentMethod::lemma_verify);
  const json j = c.to_json();
  const auto back = ExperimentConfig::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  EXPECT_EQ(back.N_list, c.N_list);
  EXPECT_EQ(*back.seed, *c.seed);
}

TEST(Config, UnknownKeysAreRejected) {
  json j = small_config(fs::temp_directory_path()).to_json();
  j["sampels"] = 10;
  EXPECT_THROW(ExperimentConfig::from_json(j), ConfigError);
}

TEST(Config, MonteCarloNeedsASeed) {
  auto c = small_config(fs::temp_directory_path());
  c.seed.reset();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, WideSupportOnlyForMonteCarlo) {
  auto c = small_config(fs::temp_directory_path());
  c.product = {parse_function_spec("triangle:1.6"), parse_function_spec("triangle:1.6")};
  EXPECT_THROW(c.validate(), ConfigError);
  c.methods = {ExperimentMethod::monte_carlo};
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, EmptyNListRejected) {
  auto c = small_config(fs::temp_directory_path());
  c.N_list.clear();
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, OutputDirFromEnvironment) {
  ::setenv("USPN_OUTPUT_DIR", "/tmp/uspn_env_dir", 1);
  EXPECT_EQ(default_output_dir(), "/tmp/uspn_env_dir");
  ::unsetenv("USPN_OUTPUT_DIR");
  EXPECT_EQ(default_output_dir(), ".");
}

TEST(Hash, FnvKnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Run, OneLevelAllMethods) {
  const auto dir = fresh_dir("all");
  const auto out = run(small_config(dir));
  EXPECT_EQ(count_method(out, "closed_form"), 1);
  EXPECT_EQ(count_method(out, "monte_carlo"), 2);
  EXPECT_EQ(count_method(out, "contour"), 2);
  EXPECT_EQ(count_method(out, "determinantal"), 2);
  EXPECT_EQ(out.exit_code, 0) << comparison_table(out.comparisons);
  for (const auto& c : out.comparisons) EXPECT_TRUE(c.pass) << c.a << " vs " << c.b << " N=" << c.N;
  EXPECT_TRUE(fs::exists(dir / "demo_results.csv"));
  EXPECT_TRUE(fs::exists(dir / "demo_manifest.json"));
  EXPECT_TRUE(fs::exists(dir / "demo_breakdown.json"));
  const auto csv = slurp(dir / "demo_results.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,n,N,sigmas,value,err,wall_time");
  fs::remove_all(dir);
}

TEST(Run, SameSeedGivesIdenticalCsv) {
  const auto d1 = fresh_dir("rep1");
  const auto d2 = fresh_dir("rep2");
  run(small_config(d1, {16}));
  run(small_config(d2, {16}));
  EXPECT_EQ(slurp(d1 / "demo_results.csv"), slurp(d2 / "demo_results.csv"));
  fs::remove_all(d1);
  fs::remove_all(d2);
}

TEST(Run, ManifestReproducesTheRun) {
  const auto dir = fresh_dir("manifest");
  const auto first = run(small_config(dir, {16}));
  const json m = json::parse(slurp(dir / "demo_manifest.json"));
  for (const char* key : {"config", "config_hash", "seed", "tool_version", "start_time", "end_time", "exit_code"})
    EXPECT_TRUE(m.contains(key)) << key;
  EXPECT_EQ(m["config_hash"].get<std::string>().size(), 16u);
  const auto again = run(ExperimentConfig::from_json(m["config"]), false);
  EXPECT_EQ(results_csv(again.rows), results_csv(first.rows));
  fs::remove_all(dir);
}

TEST(Run, WideTwoLevelRoutesToGeneralClosedForm) {
  ExperimentConfig c;
  c.product = {parse_function_spec("triangle:1.2"), parse_function_spec("triangle:1.3")};
  c.methods = {ExperimentMethod::closed_form};
  const auto out = run(c, false);
  ASSERT_EQ(out.rows.size(), 1u);
  EXPECT_EQ(out.rows[0].method, "closed_form_q3");
  bool q1 = false, q2 = false;
  for (const auto& line : out.log) {
    q1 |= line.rfind("closed_form_q1 refused", 0) == 0;
    q2 |= line.rfind("closed_form_q2 refused", 0) == 0;
  }
  EXPECT_TRUE(q1);
  EXPECT_TRUE(q2);
}

TEST(Run, LemmaVerification) {
  ExperimentConfig c;
  c.product = {parse_function_spec("triangle:0.8")};
  c.methods = {ExperimentMethod::lemma_verify};
  c.lemmas.push_back({3, {}, {}});
  const auto out = run(c, false);
  ASSERT_EQ(out.lemma_reports.size(), 1u);
  EXPECT_TRUE(out.lemma_pass[0]);
  EXPECT_EQ(out.exit_code, 0);
}
