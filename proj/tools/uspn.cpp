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

// Command-line front end: sample, closed-form, contour, lemmas, compare.
// Exit status: 0 success, 1 tolerance breach, 2 usage or configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uspn/closedform.hpp"
#include "uspn/contour.hpp"
#include "uspn/errors.hpp"
#include "uspn/experiment.hpp"
#include "uspn/haar.hpp"

using namespace uspn;
using json = nlohmann::json;

namespace {

std::vector<TestFunction> parse_functions(const std::vector<std::string>& specs) {
  std::vector<TestFunction> out;
  for (const auto& s : specs) out.push_back(parse_function_spec(s));
  return out;
}

void print_number_line(const char* label, double value, double err) {
  std::printf("%s %.15g +- %.3g\n", label, value, err);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"n-level densities of USp(2N) eigenangles"};
  app.set_version_flag("--version", std::string(USPN_VERSION));
  app.require_subcommand(1);
  const std::string fn_help = "test function, e.g. triangle:0.9, raised_cosine:1.2, piecewise_polynomial:1.5:1,0.5";

  // sample
  auto* sample = app.add_subcommand("sample", "Monte Carlo n-level density over Haar USp(2N)");
  int s_N = 16;
  long long s_samples = 10000;
  std::uint64_t s_seed = 0;
  std::vector<std::string> s_fns;
  int s_kmax = 16, s_workers = 0;
  std::string s_angles;
  long long s_angle_count = 0;
  sample->add_option("--N", s_N, "matrix half-size")->required()->check(CLI::PositiveNumber);
  sample->add_option("--samples", s_samples, "number of Haar draws")->check(CLI::Range(2LL, 1LL << 40));
  sample->add_option("--seed", s_seed, "base seed")->required();
  sample->add_option("--fn", s_fns, fn_help)->required();
  sample->add_option("--k-max", s_kmax, "image cutoff")->check(CLI::NonNegativeNumber);
  sample->add_option("--workers", s_workers, "threads (0: all cores)");
  sample->add_option("--angles-csv", s_angles, "write eigenangles of the first draws to this file");
  sample->add_option("--angles-count", s_angle_count, "draws written with --angles-csv");

  // closed-form
  auto* cf = app.add_subcommand("closed-form", "N -> infinity closed form with term breakdown");
  std::vector<std::string> c_fns;
  std::string c_counting = "unordered";
  bool c_json = false;
  cf->add_option("--fn", c_fns, fn_help)->required();
  cf->add_option("--pair-counting", c_counting, "unordered or ordered_literal")
      ->check(CLI::IsMember({"unordered", "ordered_literal"}));
  cf->add_flag("--json", c_json, "print the breakdown as JSON");

  // contour
  auto* ct = app.add_subcommand("contour", "finite-N density by contour integration (n <= 2)");
  std::vector<int> t_N{32};
  std::vector<std::string> t_fns;
  double t_scale = 0.5;
  bool t_untrunc = false;
  std::vector<double> t_sweep;
  ct->add_option("--N", t_N, "matrix half-sizes")->check(CLI::PositiveNumber);
  ct->add_option("--fn", t_fns, fn_help)->required();
  ct->add_option("--delta-scale", t_scale, "line offsets c (k+1)/N")->check(CLI::PositiveNumber);
  ct->add_flag("--untruncated", t_untrunc, "keep every shell of the kernel");
  ct->add_option("--sweep", t_sweep, "delta scales for a line-offset sweep");

  // lemmas
  auto* lm = app.add_subcommand("lemmas", "finite-N left side vs limit right side of a lemma");
  int l_k = 1;
  std::vector<std::string> l_fns;
  std::vector<int> l_A, l_B, l_A1, l_B1, l_A2, l_B2, l_N{16, 32, 64};
  double l_scale = 0.5, l_tol = -1.0;
  std::string l_out;
  lm->add_option("--lemma", l_k, "1..5")->required()->check(CLI::Range(1, 5));
  lm->add_option("--fn", l_fns, fn_help)->required();
  lm->add_option("--A", l_A);
  lm->add_option("--B", l_B);
  lm->add_option("--A1", l_A1);
  lm->add_option("--B1", l_B1);
  lm->add_option("--A2", l_A2);
  lm->add_option("--B2", l_B2);
  lm->add_option("--N-list", l_N, "N schedule for extrapolation");
  lm->add_option("--delta-scale", l_scale)->check(CLI::PositiveNumber);
  lm->add_option("--tolerance", l_tol, "relative tolerance (default per lemma)");
  lm->add_option("--out", l_out, "write the JSON report here");

  // compare
  auto* cmp = app.add_subcommand("compare", "run several methods and check agreement");
  std::string m_config;
  std::vector<std::string> m_fns, m_methods;
  std::vector<int> m_N;
  long long m_samples = 10000;
  std::uint64_t m_seed = 0;
  std::string m_out, m_name = "uspn";
  bool m_timing = false;
  cmp->add_option("--config", m_config, "JSON experiment configuration");
  cmp->add_option("--fn", m_fns, fn_help);
  cmp->add_option("--methods", m_methods, "monte_carlo contour closed_form determinantal");
  cmp->add_option("--N-list", m_N);
  cmp->add_option("--samples", m_samples);
  auto* seed_opt = cmp->add_option("--seed", m_seed);
  cmp->add_option("--output-dir", m_out, "default: $USPN_OUTPUT_DIR or .");
  cmp->add_option("--name", m_name, "file prefix");
  cmp->add_flag("--timing", m_timing, "fill the wall_time column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sample) {
      const auto fs = parse_functions(s_fns);
      const auto p = TestFunctionProduct::unrestricted(fs);
      MonteCarloOptions opt;
      opt.K_max = s_kmax;
      opt.workers = s_workers;
      const auto e = mc_n_level(s_N, p, s_samples, s_seed, opt);
      print_number_line("monte_carlo", e.value, e.std_error);
      if (!s_angles.empty()) {
        std::ofstream os(s_angles);
        if (!os) throw ConfigError("cannot write " + s_angles);
        write_eigenangle_csv_header(os);
        for_each_eigenangle_set(s_N, 0, std::max<long long>(s_angle_count, 1), s_seed,
                                [&](long long i, const EigenangleSet& set) { write_eigenangle_csv(os, i, set); });
      }
      return 0;
    }
    if (*cf) {
      const TestFunctionProduct p(parse_functions(c_fns));
      ClosedFormOptions opt;
      opt.pair_counting = c_counting == "unordered" ? PairCounting::unordered : PairCounting::ordered_literal;
      const auto b = closed_form(p, opt);
      if (c_json) {
        std::cout << b.to_json().dump(2) << "\n";
      } else {
        print_number_line(to_string(b.method).c_str(), b.total, b.error);
      }
      return 0;
    }
    if (*ct) {
      const TestFunctionProduct p(parse_functions(t_fns));
      ContourOptions opt;
      opt.untruncated = t_untrunc;
      for (int N : t_N) {
        if (!t_sweep.empty()) {
          for (const auto& pt : delta_sweep(N, p, t_sweep, opt))
            std::printf("N=%d c=%g %.15g +- %.3g\n", N, pt.c, pt.value, pt.error);
          continue;
        }
        ContourSpec spec;
        spec.delta_scale = t_scale;
        const auto r = n_level_contour(N, p, spec, opt);
        std::printf("N=%d contour %.15g +- %.3g (q=%d, nodes=%d)\n", N, r.estimate.value,
                    r.estimate.std_error, r.q, r.nodes);
      }
      return 0;
    }
    if (*lm) {
      LemmaSets sets;
      sets.A = make_index_set(l_A);
      sets.B = make_index_set(l_B);
      sets.A1 = make_index_set(l_A1);
      sets.B1 = make_index_set(l_B1);
      sets.A2 = make_index_set(l_A2);
      sets.B2 = make_index_set(l_B2);
      ContourSpec spec;
      spec.delta_scale = l_scale;
      const auto fs = parse_functions(l_fns);
      const auto rep = verify_lemma(l_k, fs, sets, l_N, spec);
      const std::string text = rep.to_json().dump(2);
      if (!l_out.empty()) {
        std::ofstream os(l_out);
        if (!os) throw ConfigError("cannot write " + l_out);
        os << text << "\n";
      }
      std::cout << text << "\n";
      const double tol = l_tol > 0 ? l_tol : Tolerances{}.lemma_rel[l_k - 1];
      return rep.rel_dev <= tol ? 0 : 1;
    }
    if (*cmp) {
      ExperimentConfig cfg;
      if (!m_config.empty()) {
        std::ifstream is(m_config);
        if (!is) throw ConfigError("cannot read " + m_config);
        json j;
        try {
          j = json::parse(is);
        } catch (const json::exception& e) {
          throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = ExperimentConfig::from_json(j);
      }
      if (!m_fns.empty()) cfg.product = parse_functions(m_fns);
      if (!m_methods.empty()) {
        cfg.methods.clear();
        for (const auto& m : m_methods) cfg.methods.push_back(experiment_method_from_string(m));
      }
      if (!m_N.empty()) cfg.N_list = m_N;
      if (cmp->count("--samples")) cfg.samples = m_samples;
      if (seed_opt->count()) cfg.seed = m_seed;
      if (!m_out.empty()) cfg.output_dir = m_out;
      if (cmp->count("--name")) cfg.name = m_name;
      if (m_timing) cfg.timing = true;
      const auto res = run(cfg);
      std::cout << results_csv(res.rows) << "\n" << comparison_table(res.comparisons);
      for (std::size_t i = 0; i < res.lemma_reports.size(); ++i)
        std::printf("lemma %d rel_dev %.3e %s\n", res.lemma_reports[i].lemma, res.lemma_reports[i].rel_dev,
                    res.lemma_pass[i] ? "ok" : "BREACH");
      for (const auto& line : res.log) std::cerr << line << "\n";
      return res.exit_code;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
