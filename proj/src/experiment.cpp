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

#include "uspn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "uspn/detform.hpp"
#include "uspn/errors.hpp"
#include "uspn/haar.hpp"

#ifndef USPN_VERSION
#define USPN_VERSION "0.0.0"
#endif

namespace uspn {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + s + "' in " + what);
  }
}

// Sup over angles of |folded sum|, from its Poisson form.
double folded_sup(int N, const TestFunction& f) {
  double s = std::abs(f.fhat(0.0));
  for (int m = 1; m <= 2.0 * N * f.sigma(); ++m) s += 2.0 * std::abs(f.fhat(m / (2.0 * N)));
  return s / N;
}

// Bias bound of the truncated image sum on an n-fold product.
double image_bias(int N, const std::vector<TestFunction>& fs, int K_max) {
  double total = 0.0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    double p = image_tail_bound(N, fs[k], K_max);
    for (std::size_t j = 0; j < fs.size(); ++j)
      if (j != k) p *= folded_sup(N, fs[j]) + image_tail_bound(N, fs[j], K_max);
    total += p;
  }
  return total;
}

const std::set<std::string> kConfigKeys{
    "product", "methods", "N_list", "samples", "seed", "output_dir", "name", "timing",
    "K_max", "workers", "delta_scale", "lemma_N", "lemmas", "tolerances"};

}  // namespace

std::string to_string(ExperimentMethod m) {
  switch (m) {
    case ExperimentMethod::monte_carlo: return "monte_carlo";
    case ExperimentMethod::contour: return "contour";
    case ExperimentMethod::closed_form: return "closed_form";
    case ExperimentMethod::determinantal: return "determinantal";
    case ExperimentMethod::lemma_verify: return "lemma_verify";
  }
  return "unknown";
}

ExperimentMethod experiment_method_from_string(const std::string& name) {
  for (auto m : {ExperimentMethod::monte_carlo, ExperimentMethod::contour,
                 ExperimentMethod::closed_form, ExperimentMethod::determinantal,
                 ExperimentMethod::lemma_verify})
    if (to_string(m) == name) return m;
  throw ConfigError("unknown method '" + name + "'");
}

TestFunction parse_function_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3) throw ConfigError("function spec '" + spec + "'");
  try {
    const auto kind = profile_kind_from_string(parts[0]);
    const double sigma = to_number(parts[1], spec);
    if (kind == ProfileKind::piecewise_polynomial) {
      if (parts.size() != 3) throw ConfigError("polynomial spec needs coefficients: '" + spec + "'");
      std::vector<double> c;
      for (const auto& x : split(parts[2], ',')) c.push_back(to_number(x, spec));
      return make_piecewise_polynomial(sigma, c);
    }
    if (parts.size() != 2) throw ConfigError("unexpected coefficients in '" + spec + "'");
    return TestFunction(kind == ProfileKind::triangle ? FourierProfile::triangle(sigma)
                                                      : FourierProfile::raised_cosine(sigma));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

bool ExperimentConfig::has(ExperimentMethod m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

void ExperimentConfig::validate() const {
  if (product.empty() && !(methods.size() == 1 && has(ExperimentMethod::lemma_verify)))
    throw ConfigError("product must have at least one factor");
  if (methods.empty()) throw ConfigError("no methods requested");
  double support = 0.0;
  for (const auto& f : product) support += f.sigma();
  const bool mc_only = methods.size() == 1 && has(ExperimentMethod::monte_carlo);
  if (!mc_only && support >= 3.0)
    throw ConfigError("total support must be < 3 unless only monte_carlo is requested");
  const bool needs_N = has(ExperimentMethod::monte_carlo) || has(ExperimentMethod::contour) ||
                       has(ExperimentMethod::determinantal);
  if (needs_N && N_list.empty()) throw ConfigError("N_list is empty");
  for (int N : N_list)
    if (N < 1) throw ConfigError("N must be >= 1");
  if (has(ExperimentMethod::monte_carlo)) {
    if (!seed) throw ConfigError("monte_carlo requires a seed");
    if (samples < 2) throw ConfigError("samples must be >= 2");
  }
  if (K_max < 0) throw ConfigError("K_max must be >= 0");
  if (!(delta_scale > 0.0)) throw ConfigError("delta_scale must be positive");
  if (has(ExperimentMethod::lemma_verify)) {
    if (lemmas.empty()) throw ConfigError("lemma_verify requires a 'lemmas' list");
    if (lemma_N.empty()) throw ConfigError("lemma_N is empty");
    for (const auto& l : lemmas)
      if (l.lemma < 1 || l.lemma > 5) throw ConfigError("lemma index must be 1..5");
  }
  const auto& t = tolerances;
  if (!(t.mc_sigmas > 0 && t.mc_allowance >= 0 && t.contour_allowance >= 0 &&
        t.determinantal_allowance >= 0 && t.exact_agreement >= 0))
    throw ConfigError("tolerances must be non-negative");
  if (t.lemma_rel.size() != 5) throw ConfigError("tolerances.lemma_rel needs five entries");
  if (name.empty() || name.find('/') != std::string::npos) throw ConfigError("bad run name");
}

json ExperimentConfig::to_json() const {
  json j;
  json p = json::array();
  for (const auto& f : product) p.push_back(uspn::to_json(f));
  j["product"] = p;
  json m = json::array();
  for (auto x : methods) m.push_back(to_string(x));
  j["methods"] = m;
  j["N_list"] = N_list;
  j["samples"] = samples;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["output_dir"] = output_dir;
  j["name"] = name;
  j["timing"] = timing;
  j["K_max"] = K_max;
  j["workers"] = workers;
  j["delta_scale"] = delta_scale;
  j["lemma_N"] = lemma_N;
  json ls = json::array();
  for (const auto& l : lemmas) {
    json e{{"lemma", l.lemma}};
    if (!l.functions.empty()) {
      json fs = json::array();
      for (const auto& f : l.functions) fs.push_back(uspn::to_json(f));
      e["functions"] = fs;
    }
    if (l.lemma == 4) {
      e["A"] = l.sets.A;
      e["B"] = l.sets.B;
    }
    if (l.lemma == 5) {
      e["A1"] = l.sets.A1;
      e["B1"] = l.sets.B1;
      e["A2"] = l.sets.A2;
      e["B2"] = l.sets.B2;
    }
    ls.push_back(e);
  }
  j["lemmas"] = ls;
  j["tolerances"] = {{"mc_sigmas", tolerances.mc_sigmas},
                     {"mc_allowance", tolerances.mc_allowance},
                     {"contour_allowance", tolerances.contour_allowance},
                     {"determinantal_allowance", tolerances.determinantal_allowance},
                     {"exact_agreement", tolerances.exact_agreement},
                     {"lemma_rel", tolerances.lemma_rel}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kConfigKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("product"))
      for (const auto& f : j.at("product")) c.product.push_back(test_function_from_json(f));
    if (!j.contains("methods")) throw ConfigError("config needs 'methods'");
    for (const auto& m : j.at("methods")) c.methods.push_back(experiment_method_from_string(m));
    if (j.contains("N_list")) c.N_list = j.at("N_list").get<std::vector<int>>();
    if (j.contains("samples")) c.samples = j.at("samples").get<long long>();
    if (j.contains("seed") && !j.at("seed").is_null()) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("name")) c.name = j.at("name").get<std::string>();
    if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
    if (j.contains("K_max")) c.K_max = j.at("K_max").get<int>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("delta_scale")) c.delta_scale = j.at("delta_scale").get<double>();
    if (j.contains("lemma_N")) c.lemma_N = j.at("lemma_N").get<std::vector<int>>();
    if (j.contains("lemmas")) {
      for (const auto& e : j.at("lemmas")) {
        LemmaRequest r;
        r.lemma = e.at("lemma").get<int>();
        if (e.contains("functions"))
          for (const auto& f : e.at("functions")) r.functions.push_back(test_function_from_json(f));
        auto set = [&](const char* key, IndexSet& dst) {
          if (e.contains(key)) dst = make_index_set(e.at(key).get<std::vector<int>>());
        };
        set("A", r.sets.A);
        set("B", r.sets.B);
        set("A1", r.sets.A1);
        set("B1", r.sets.B1);
        set("A2", r.sets.A2);
        set("B2", r.sets.B2);
        c.lemmas.push_back(r);
      }
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      auto num = [&](const char* key, double& dst) {
        if (t.contains(key)) dst = t.at(key).get<double>();
      };
      num("mc_sigmas", c.tolerances.mc_sigmas);
      num("mc_allowance", c.tolerances.mc_allowance);
      num("contour_allowance", c.tolerances.contour_allowance);
      num("determinantal_allowance", c.tolerances.determinantal_allowance);
      num("exact_agreement", c.tolerances.exact_agreement);
      if (t.contains("lemma_rel")) c.tolerances.lemma_rel = t.at("lemma_rel").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string default_output_dir() {
  const char* env = std::getenv("USPN_OUTPUT_DIR");
  return (env && *env) ? env : ".";
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string results_csv(const std::vector<ResultRow>& rows) {
  std::string out = "method,n,N,sigmas,value,err,wall_time\n";
  for (const auto& r : rows) {
    std::string sig;
    for (std::size_t i = 0; i < r.sigmas.size(); ++i) sig += (i ? ";" : "") + fmt(r.sigmas[i]);
    out += r.method + "," + std::to_string(r.n) + "," + (r.N ? std::to_string(r.N) : "") + "," +
           sig + "," + fmt(r.value) + "," + fmt(r.err) + "," +
           (r.wall_time ? fmt(*r.wall_time) : "") + "\n";
  }
  return out;
}

std::string comparison_table(const std::vector<Comparison>& comps) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-16s %-16s %5s %12s %12s %s\n", "a", "b", "N", "deviation",
                "budget", "status");
  out += buf;
  for (const auto& c : comps) {
    std::snprintf(buf, sizeof buf, "%-16s %-16s %5d %12.4e %12.4e %s\n", c.a.c_str(), c.b.c_str(),
                  c.N, c.deviation, c.budget, c.pass ? "ok" : "BREACH");
    out += buf;
  }
  return out;
}

ExperimentOutcome run(const ExperimentConfig& config, bool write_files) {
  config.validate();
  ExperimentOutcome out;
  const std::string start = utc_now();
  const auto& tol = config.tolerances;
  std::vector<double> sigmas;
  for (const auto& f : config.product) sigmas.push_back(f.sigma());
  const int n = static_cast<int>(config.product.size());

  auto timed = [&](auto&& fn) {
    const auto t0 = Clock::now();
    auto r = fn();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    return std::pair{r, dt};
  };
  auto add_row = [&](const std::string& method, int N, double value, double err, double dt) {
    ResultRow r{method, n, N, sigmas, value, err, std::nullopt};
    if (config.timing) r.wall_time = dt;
    out.rows.push_back(r);
  };

  std::optional<double> limit;
  std::string limit_name;
  if (config.has(ExperimentMethod::closed_form)) {
    const TestFunctionProduct p(config.product);
    const int q = p.support_class().value_or(3);
    const std::span<const TestFunction> fs(config.product);
    if (q > 1) {
      try {
        (void)rubinstein_rhs(fs);
      } catch (const DomainError& e) {
        out.log.push_back(std::string("closed_form_q1 refused: ") + e.what());
      }
    }
    if (q > 2) {
      try {
        (void)gao_rhs(fs);
      } catch (const DomainError& e) {
        out.log.push_back(std::string("closed_form_q2 refused: ") + e.what());
      }
    }
    auto [b, dt] = timed([&] { return closed_form(p); });
    limit = b.total;
    limit_name = to_string(b.method);
    add_row(limit_name, 0, b.total, b.error, dt);
    out.breakdowns.push_back(b);
  }

  auto compare = [&](const std::string& a, const std::string& b, int N, double x, double y,
                     double budget) {
    const double dev = std::abs(x - y);
    out.comparisons.push_back({a, b, N, dev, budget, dev <= budget});
  };

  for (int N : config.N_list) {
    std::optional<DensityEstimate> mc, contour, det;
    if (config.has(ExperimentMethod::monte_carlo)) {
      MonteCarloOptions opt;
      opt.K_max = config.K_max;
      opt.workers = config.workers;
      const auto p = TestFunctionProduct::unrestricted(config.product);
      auto [e, dt] = timed([&] { return mc_n_level(N, p, config.samples, *config.seed, opt); });
      mc = e;
      add_row("monte_carlo", N, e.value, e.std_error, dt);
    }
    if (config.has(ExperimentMethod::contour)) {
      if (n > 2) {
        out.log.push_back("contour skipped at N=" + std::to_string(N) + ": n > 2");
      } else {
        ContourSpec spec;
        spec.delta_scale = config.delta_scale;
        auto [r, dt] = timed([&] { return n_level_contour(N, TestFunctionProduct(config.product), spec); });
        contour = r.estimate;
        add_row("contour", N, r.estimate.value, r.estimate.std_error, dt);
      }
    }
    if (config.has(ExperimentMethod::determinantal)) {
      if (n > 2) {
        out.log.push_back("determinantal skipped at N=" + std::to_string(N) + ": n > 2");
      } else {
        auto [e, dt] = timed([&] {
          return n == 1 ? one_level_folded(N, config.product[0], -1)
                        : two_level_folded(N, config.product[0], config.product[1], -1);
        });
        det = e;
        add_row("determinantal", N, e.value, e.std_error, dt);
      }
    }

    if (limit) {
      if (mc)
        compare("monte_carlo", limit_name, N, mc->value, *limit,
                tol.mc_sigmas * mc->std_error + tol.mc_allowance);
      if (contour)
        compare("contour", limit_name, N, contour->value, *limit,
                tol.contour_allowance + contour->std_error);
      if (det)
        compare("determinantal", limit_name, N, det->value, *limit,
                tol.determinantal_allowance + det->std_error);
    }
    if (contour && det)
      compare("contour", "determinantal", N, contour->value, det->value,
              tol.exact_agreement + contour->std_error + det->std_error);
    const auto& exact = contour ? contour : det;
    if (mc && exact)
      compare("monte_carlo", contour ? "contour" : "determinantal", N, mc->value, exact->value,
              tol.mc_sigmas * mc->std_error + image_bias(N, config.product, config.K_max) +
                  tol.exact_agreement + exact->std_error);
  }

  if (config.has(ExperimentMethod::lemma_verify)) {
    ContourSpec spec;
    spec.delta_scale = config.delta_scale;
    for (const auto& req : config.lemmas) {
      const auto& fs = req.functions.empty() ? config.product : req.functions;
      auto rep = verify_lemma(req.lemma, fs, req.sets, config.lemma_N, spec);
      const bool ok = rep.rel_dev <= tol.lemma_rel[req.lemma - 1];
      if (rep.weak) out.log.push_back("lemma " + std::to_string(req.lemma) + ": right-hand side vanishes (weak check)");
      out.lemma_reports.push_back(rep);
      out.lemma_pass.push_back(ok);
    }
  }

  bool pass = true;
  for (const auto& c : out.comparisons) pass = pass && c.pass;
  for (bool b : out.lemma_pass) pass = pass && b;
  out.exit_code = pass ? 0 : 1;

  const json cfg = config.to_json();
  out.manifest = {{"config", cfg},
                  {"config_hash", [&] {
                     char buf[20];
                     std::snprintf(buf, sizeof buf, "%016llx",
                                   static_cast<unsigned long long>(fnv1a64(cfg.dump())));
                     return std::string(buf);
                   }()},
                  {"seed", config.seed ? json(*config.seed) : json(nullptr)},
                  {"tool_version", USPN_VERSION},
                  {"start_time", start},
                  {"end_time", utc_now()},
                  {"exit_code", out.exit_code},
                  {"log", out.log}};

  if (write_files) {
    namespace fs = std::filesystem;
    const fs::path dir = config.output_dir.empty() ? fs::path(default_output_dir()) : fs::path(config.output_dir);
    fs::create_directories(dir);
    auto write = [&](const std::string& file, const std::string& text) {
      const fs::path p = dir / (config.name + file);
      std::ofstream os(p, std::ios::binary);
      if (!os) throw std::runtime_error("cannot write " + p.string());
      os << text;
      out.files.push_back(p.string());
    };
    write("_results.csv", results_csv(out.rows));
    if (!out.breakdowns.empty()) write("_breakdown.json", out.breakdowns.front().to_json().dump(2) + "\n");
    for (std::size_t i = 0; i < out.lemma_reports.size(); ++i)
      write("_lemma" + std::to_string(out.lemma_reports[i].lemma) + "_" + std::to_string(i) + ".json",
            out.lemma_reports[i].to_json().dump(2) + "\n");
    out.manifest["outputs"] = out.files;
    write("_manifest.json", out.manifest.dump(2) + "\n");
  }
  return out;
}

}  // namespace uspn
