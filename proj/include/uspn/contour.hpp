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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "uspn/combinat.hpp"
#include "uspn/estimate.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

struct ContourSpec {
  // Per-variable line offsets, strictly increasing. Empty: delta_k = c (k + 1) / N.
  std::vector<double> deltas;
  double delta_scale = 0.5;  // c
  // Half-height of truncated lines; 0 picks 50 / (N delta) capped at 500.
  double truncation_T = 0.0;
  // Lower bound on quadrature nodes per line (raised automatically).
  int nodes_per_line = 64;
  double tolerance = 1e-8;

  void validate() const;
  std::vector<double> resolve_deltas(int N, std::size_t count) const;
  double resolve_T(int N, double delta) const;
};

struct LineIntegral {
  cplx value;
  double error = 0.0;
  int panels = 0;
};

// (1/2 pi i) int_{delta - iT}^{delta + iT} g(z) e^{2 pi frequency z} dz, by
// Gauss-Legendre panels with a panel-doubling check. For frequency != 0 the
// two tails beyond +-T are added by integration by parts (three terms);
// otherwise the tail is required to have decayed.
LineIntegral vertical_line_integral(const std::function<cplx(cplx)>& g, double delta,
                                    double T, const ContourSpec& spec, double frequency = 0.0);

// All 2 pi i periodic kernels reduce a full vertical line to one period:
//   int_{(delta)} K(z) f((N/pi) i z) dz = i int_{-pi}^{pi} K(z) F_N(z) dy,
//   F_N(z) = (1/2N) sum_m fhat(m / 2N) e^{-m z},  z = delta + i y,
// a finite sum. The trapezoid rule on one period then converges
// geometrically, with rate set by the distance of the nearest pole.
struct PeriodicGrid {
  int M = 0;  // nodes; y_j = -pi + 2 pi j / M
  double h() const;
  double y(int j) const;
};

std::vector<cplx> periodized_profile(int N, const TestFunction& f, double delta,
                                     const PeriodicGrid& grid);

// Node count for kernel bandwidth `bandwidth` (largest frequency) and
// nearest singularity at distance `gap` from the line.
int periodic_nodes(double bandwidth, double gap, int minimum);

enum class ContourRoute {
  tabulated,        // kernel tables on the periodic grid, O(M^2) for n = 2
  direct,           // j_star_trunc at every grid point (slow, cross-check)
  truncated_lines,  // vertical_line_integral on [-T, T], n = 1 only
};

struct ContourOptions {
  int q = 0;                 // truncation; 0 = product.support_class()
  bool untruncated = false;  // use all shells |D| <= n
  ContourRoute route = ContourRoute::tabulated;
};

struct ContourTerm {
  IndexSet Q;
  IndexSet M;
  double value = 0.0;
  double error = 0.0;
};

struct ContourResult {
  DensityEstimate estimate;
  std::vector<ContourTerm> terms;
  std::vector<double> deltas;
  int nodes = 0;
  int q = 0;
};

// n-level density at finite N from the (Q, M) expansion with the truncated
// kernel; n <= 2.
ContourResult n_level_contour(int N, const TestFunctionProduct& product,
                              const ContourSpec& spec = {}, const ContourOptions& opt = {});

struct DeltaSweepPoint {
  double c = 0.0;
  double value = 0.0;
  double error = 0.0;
};

// n_level_contour at delta scales c, for checking independence of the lines.
std::vector<DeltaSweepPoint> delta_sweep(int N, const TestFunctionProduct& product,
                                         std::span<const double> scales,
                                         const ContourOptions& opt = {});

// Index sets for the lemma verifiers; labels index into fns.
struct LemmaSets {
  IndexSet A, B;            // lemma 4
  IndexSet A1, B1, A2, B2;  // lemma 5
};

struct LemmaPoint {
  int N = 0;
  double lhs = 0.0;
  double error = 0.0;
  int nodes = 0;
};

struct LemmaReport {
  int lemma = 0;
  nlohmann::json params;
  std::vector<LemmaPoint> per_N;
  double extrapolated = 0.0;
  double rhs = 0.0;
  double rel_dev = 0.0;      // extrapolant against rhs
  double rel_dev_raw = 0.0;  // largest-N value against rhs
  bool monotone = true;      // successive differences shrink and keep sign
  bool weak = false;         // rhs vanishes: region empty

  nlohmann::json to_json() const;
};

// Finite-N left-hand side of lemma k in {1, ..., 5}.
LemmaPoint lemma_lhs(int k, int N, std::span<const TestFunction> fns, const LemmaSets& sets,
                     const ContourSpec& spec = {});

double lemma_rhs(int k, std::span<const TestFunction> fns, const LemmaSets& sets);

LemmaReport verify_lemma(int k, std::span<const TestFunction> fns, const LemmaSets& sets,
                         std::vector<int> N_schedule = {16, 32, 64},
                         const ContourSpec& spec = {});

}  // namespace uspn
