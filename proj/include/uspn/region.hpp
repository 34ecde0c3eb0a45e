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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "uspn/combinat.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

// sum_{i in lhs} u_i <= sum_{j in rhs} u_j - 1
struct LinearInequality {
  IndexSet lhs;
  IndexSet rhs;
};

// sum_{i in plus} u_i = sum_{j in minus} u_j, realized by eliminating the
// lowest-index variable of `plus`.
struct Hyperplane {
  IndexSet plus;
  IndexSet minus;
};

// constant + sum_i coefficient_i * u_i, keyed by variable label.
struct AffineWeight {
  double constant = 1.0;
  std::vector<std::pair<int, double>> terms;
};

// Variables are labelled by the entries of `dims` and range over
// [0, upper_bounds[k]] for dims[k].
struct ConstrainedRegion {
  IndexSet dims;
  std::vector<double> upper_bounds;
  std::vector<LinearInequality> inequalities;
  std::optional<Hyperplane> hyperplane;

  // Throws DomainError on inconsistent labels.
  void validate() const;
  // True when some inequality needs sum over rhs of upper bounds > 1 and
  // does not get it, so the region has measure zero.
  bool provably_empty() const;
  std::string to_string() const;
};

enum class RegionMethod {
  automatic,
  factorized,         // disjoint single-constraint groups, via tails and densities of signed sums
  nested,             // iterated Gauss-Legendre split at polytope vertices
  quasi_monte_carlo,  // randomly shifted Sobol points
};

struct RegionOptions {
  RegionMethod method = RegionMethod::automatic;
  int qmc_points = 1 << 16;
  int qmc_replicas = 8;
  unsigned long long qmc_seed = 7;
};

struct RegionResult {
  double value = 0.0;
  double error = 0.0;
  RegionMethod method = RegionMethod::automatic;
};

std::string to_string(RegionMethod m);

// Integral of prod_k fhat_k(u_{dims[k]}) * weight over the region. profiles[k]
// belongs to dims[k]. Automatic dispatch: empty check, then factorized when
// the region allows it, nested up to 4 free variables, quasi-Monte Carlo for
// 5 or 6. More than 6 variables raises CapacityError.
RegionResult constrained_integral(const ConstrainedRegion& region,
                                  std::span<const FourierProfile> profiles,
                                  const AffineWeight& weight = {},
                                  const RegionOptions& options = {});

// Signed sum T = sum_k s_k u_k with u_k in [0, b_k] weighted by fhat_k, where
// b_k defaults to sigma_k.
class SignedSum {
 public:
  SignedSum(std::vector<FourierProfile> profiles, std::vector<int> signs,
            std::vector<double> bounds = {});

  // int 1{T >= c} prod fhat_k du
  double tail(double c) const;
  // int delta(T - t) prod fhat_k du
  double density(double t) const;
  // Values of T at the vertices of the box, sorted and deduplicated.
  const std::vector<double>& breakpoints() const noexcept { return breaks_.back(); }
  double min_value() const noexcept { return breaks_.back().front(); }
  double max_value() const noexcept { return breaks_.back().back(); }
  std::size_t size() const noexcept { return profiles_.size(); }

 private:
  double tail_rec(std::size_t k, double c) const;
  double density_rec(std::size_t k, double t) const;

  std::vector<FourierProfile> profiles_;
  std::vector<int> signs_;
  std::vector<double> bounds_;
  std::vector<double> mass_prefix_;             // prod of masses of the first k+1
  std::vector<std::vector<double>> breaks_;     // vertex values of the first k+1
};

// int_c^inf (slope t + intercept) p_a(t) p_b(t) dt for two signed sums.
double density_product_integral(const SignedSum& a, const SignedSum& b, double c, double slope,
                                double intercept);

}  // namespace uspn
