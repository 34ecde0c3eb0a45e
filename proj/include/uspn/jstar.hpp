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

#include <span>
#include <vector>

#include "uspn/combinat.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

// z(x) = 1 / (1 - e^{-x}) and its logarithmic derivatives. Poles at 2 pi i Z;
// arguments within 1e-12 of a pole raise SingularityError.
cplx z_func(cplx x);
cplx z_log_deriv(cplx x);        // z'/z(x) = -1 / (e^x - 1)
cplx z_log_deriv_prime(cplx x);  // (z'/z)'(x) = e^x / (e^x - 1)^2

// Block factor H_D(W) for |W| <= 2.
cplx h_factor(std::span<const cplx> D, std::span<const cplx> W);

// Square-root factor of the D-term including (-1)^{|D|}, with each z(x)
// paired against z(-x):
//   (-1)^{|D|} prod_d z(-2d) prod_{d<g} z(d+g) z(-d-g) / (z(d-g) z(g-d)).
cplx yz_prefactor(std::span<const cplx> D);

// The literal quantity under the root, Z(D,D) Z(D-,D-) Y(D-) / (Y(D) Zdag(D-,D)^2).
cplx yz_sqrt_argument(std::span<const cplx> D);

// Sum over D with |D| = k only.
cplx j_star_shell(int N, std::span<const cplx> A, int k);
cplx j_star(int N, std::span<const cplx> A);
// Keeps |D| < q.
cplx j_star_trunc(int N, std::span<const cplx> A, int q);

struct JStarTerm {
  IndexSet D;
  PairSingletonPartition partition;
  cplx value;
};

// Every (D, partition) term with |D| < q, indices 0-based into A.
std::vector<JStarTerm> j_star_terms(int N, std::span<const cplx> A, int q);

// Throws SingularityError if some 2 alpha or alpha + beta (alpha != beta)
// lies within eps of 2 pi i Z.
void check_argument_margin(std::span<const cplx> A, double eps = 1e-8);

// How the two distinguished variables d, g of the |D| = 2 shell are counted
// in the regrouped expansions.
enum class PairCounting {
  unordered,        // each set {d, g} once, as in the defining sum over D
  ordered_literal,  // ordered (d, g), as the regrouped sums are written
};

// Regrouped q = 2 expansion over (S2, matching, S3, I, d).
cplx j_star_grouped_q2(int N, std::span<const cplx> A);

// Block-factor form of the q = 3 kernel: |D| = 0, 1, 2 shells written with
// H_{d}, H_{d,g} and even subsets R.
cplx j_star_blocks_q3(int N, std::span<const cplx> A, PairCounting counting);

// Fully regrouped q = 3 expansion over (S2, S3, I, d) and
// (S4, I1, I1c, I2, I2c, d, g).
cplx j_star_grouped_q3(int N, std::span<const cplx> A, PairCounting counting);

}  // namespace uspn
