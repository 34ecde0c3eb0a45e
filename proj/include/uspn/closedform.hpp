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

#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "uspn/combinat.hpp"
#include "uspn/estimate.hpp"
#include "uspn/jstar.hpp"
#include "uspn/region.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

struct ClosedFormTerm {
  std::string descriptor;
  double value = 0.0;
};

struct ClosedFormBreakdown {
  Method method = Method::closed_form_q1;
  int n = 0;
  double total = 0.0;
  // Propagated region-quadrature error (nonzero only for sampled regions).
  double error = 0.0;
  std::vector<ClosedFormTerm> terms;

  nlohmann::json to_json() const;
  DensityEstimate estimate() const;
};

struct ClosedFormOptions {
  // Counting of the two distinguished variables in the |D| = 2 block of the
  // support-3 form. `unordered` matches the defining kernel sum;
  // `ordered_literal` keeps the regrouped ordered sum as written.
  PairCounting pair_counting = PairCounting::unordered;
  std::size_t max_factors = 5;  // support-3 combinatorial guard
  RegionOptions region;
};

// Limits of the n-level density over all index tuples, for Fourier support
// sum sigma_i <= 1, <= 2 and < 3. The span overloads accept n = 0.
ClosedFormBreakdown rubinstein_rhs(std::span<const TestFunction> fns,
                                   const ClosedFormOptions& opt = {});
ClosedFormBreakdown gao_rhs(std::span<const TestFunction> fns, const ClosedFormOptions& opt = {});
ClosedFormBreakdown support3_rhs(std::span<const TestFunction> fns,
                                 const ClosedFormOptions& opt = {});

ClosedFormBreakdown rubinstein_rhs(const TestFunctionProduct& p, const ClosedFormOptions& opt = {});
ClosedFormBreakdown gao_rhs(const TestFunctionProduct& p, const ClosedFormOptions& opt = {});
ClosedFormBreakdown support3_rhs(const TestFunctionProduct& p, const ClosedFormOptions& opt = {});

// Chooses the evaluator from the support class.
ClosedFormBreakdown closed_form(const TestFunctionProduct& p, const ClosedFormOptions& opt = {});

// Right-hand sides of the five limit identities used in the derivation.
// Index sets refer to positions in `fns`.
double lemma1_rhs(const TestFunction& f1, const TestFunction& f2);  // 2 int |u| fhat1 fhat2
double lemma2_rhs(const TestFunction& f);                           // -1/2 int fhat
double lemma3_rhs(const TestFunction& f);                           // int f
// -1/2 2^{|A u B|} (-1)^{|B|} int_{sum_A u <= sum_B u - 1} prod fhat
double lemma4_rhs(std::span<const TestFunction> fns, const IndexSet& A, const IndexSet& B,
                  const RegionOptions& opt = {});
// 2^m (-1)^{|B1 u B2|} int (1/4 - [(sum_B2 u - sum_A2 u - 1) delta(...)]) prod fhat
double lemma5_rhs(std::span<const TestFunction> fns, const IndexSet& A1, const IndexSet& B1,
                  const IndexSet& A2, const IndexSet& B2, const RegionOptions& opt = {});

}  // namespace uspn
