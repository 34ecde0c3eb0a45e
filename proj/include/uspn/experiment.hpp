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

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "uspn/closedform.hpp"
#include "uspn/contour.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

// Malformed configuration; maps to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentMethod { monte_carlo, contour, closed_form, determinantal, lemma_verify };

std::string to_string(ExperimentMethod m);
ExperimentMethod experiment_method_from_string(const std::string& name);

// "triangle:0.9", "raised_cosine:1.2", "piecewise_polynomial:1.5:1,0.5".
TestFunction parse_function_spec(const std::string& spec);

struct Tolerances {
  double mc_sigmas = 3.0;
  // Finite-N gap allowed against the N -> infinity closed form.
  double mc_allowance = 2e-2;
  double contour_allowance = 5e-2;
  double determinantal_allowance = 2e-2;
  // Between exact finite-N methods (contour, determinantal) at equal N.
  double exact_agreement = 1e-6;
  // Relative deviation per lemma, indices 1..5.
  std::vector<double> lemma_rel{1e-3, 1e-3, 1e-9, 1e-2, 1e-2};
};

struct LemmaRequest {
  int lemma = 1;
  std::vector<TestFunction> functions;  // empty: the configured product
  LemmaSets sets;
};

struct ExperimentConfig {
  std::vector<TestFunction> product;
  std::vector<ExperimentMethod> methods;
  std::vector<int> N_list;
  long long samples = 10000;
  std::optional<std::uint64_t> seed;
  std::string output_dir;  // empty: $USPN_OUTPUT_DIR, else "."
  std::string name = "uspn";
  bool timing = false;     // fill the wall_time column
  int K_max = 16;          // image cutoff for Monte Carlo sums
  int workers = 0;
  double delta_scale = 0.5;
  std::vector<int> lemma_N{16, 32, 64};
  std::vector<LemmaRequest> lemmas;
  Tolerances tolerances;

  bool has(ExperimentMethod m) const;
  // Throws ConfigError.
  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

std::string default_output_dir();

struct ResultRow {
  std::string method;
  int n = 0;
  int N = 0;  // 0 for the N -> infinity closed form
  std::vector<double> sigmas;
  double value = 0.0;
  double err = 0.0;
  std::optional<double> wall_time;
};

struct Comparison {
  std::string a, b;
  int N = 0;
  double deviation = 0.0;
  double budget = 0.0;
  bool pass = true;
};

struct ExperimentOutcome {
  std::vector<ResultRow> rows;
  std::vector<Comparison> comparisons;
  std::vector<ClosedFormBreakdown> breakdowns;
  std::vector<LemmaReport> lemma_reports;
  std::vector<bool> lemma_pass;
  std::vector<std::string> log;
  std::vector<std::string> files;
  nlohmann::json manifest;
  int exit_code = 0;
};

// Runs the configured methods and, with write_files, writes
// <name>_results.csv, <name>_breakdown.json, <name>_lemma<k>_<i>.json and
// <name>_manifest.json into the output directory.
ExperimentOutcome run(const ExperimentConfig& config, bool write_files = true);

std::string results_csv(const std::vector<ResultRow>& rows);
std::string comparison_table(const std::vector<Comparison>& comps);

std::uint64_t fnv1a64(const std::string& data);

}  // namespace uspn
