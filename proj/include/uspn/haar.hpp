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

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "uspn/estimate.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

// One Haar draw from USp(2N). Rows and columns are interleaved so that
// the skew form is J = diag([[0, 1], [-1, 0]], ...).
struct SymplecticUnitarySample {
  int N = 0;
  Eigen::MatrixXcd matrix;
  std::uint64_t seed = 0;
};

// The N principal eigenangles, sorted, in [0, pi].
struct EigenangleSet {
  int N = 0;
  std::vector<double> angles;
};

Eigen::MatrixXcd standard_skew_form(int N);

// Quaternionic Gram-Schmidt of a quaternionic Ginibre matrix.
Eigen::MatrixXcd draw_usp(int N, std::mt19937_64& rng);
SymplecticUnitarySample sample_usp(int N, std::uint64_t seed);

// Resampled Gram-Schmidt columns since process start (numerically dependent draws).
long long resample_events();

// General eigensolver; checks that eigenvalues pair as e^{+-i theta} within 1e-8.
EigenangleSet eigenangles(const SymplecticUnitarySample& sample);
EigenangleSet eigenangles(const Eigen::MatrixXcd& U);

// Faster route through the Hermitian part (U + U^*)/2, whose spectrum is
// cos(theta_j), each twice. Checks the double degeneracy within 1e-8.
EigenangleSet eigenangles_hermitian(const Eigen::MatrixXcd& U);

// Block-diagonal test matrix with eigenvalues e^{+-i theta_j}.
Eigen::MatrixXcd diagonal_usp(std::span<const double> thetas);

// Periodic extension over nonzero integers: 1..N -> theta_j, N+1..2N ->
// 2 pi - theta_{2N+1-j}, period 2 pi in blocks of 2N, odd under j -> -j.
double extended_angle(const EigenangleSet& set, long long j);

// sum over signed indices and images |k| <= K_max of f((N/pi) theta).
double one_level_sum(const EigenangleSet& set, const TestFunction& f, int K_max);

// Upper bound on |one_level_sum(K_max) - one_level_sum(infinity)| for any
// angle set, from |f(x)| <= V / (4 pi^2 x^2).
double image_tail_bound(int N, const TestFunction& f, int K_max);

// Product of one-level sums over the factors.
double empirical_n_level(const EigenangleSet& set, const TestFunctionProduct& product,
                         int K_max);

struct MonteCarloOptions {
  int K_max = 4;
  int workers = 0;  // 0: hardware concurrency
  bool hermitian_route = true;
};

// Per-sample values of each product, computed from shared Haar draws.
// Entry [p][s] is product p evaluated on sample s.
std::vector<std::vector<double>> mc_sample_values(int N,
                                                  std::span<const TestFunctionProduct> products,
                                                  long long num_samples, std::uint64_t seed,
                                                  const MonteCarloOptions& options = {});

DensityEstimate mc_n_level(int N, const TestFunctionProduct& product, long long num_samples,
                           std::uint64_t seed, const MonteCarloOptions& options = {});

// Draws eigenangles for samples [first, first+count) and hands them to visit.
void for_each_eigenangle_set(int N, long long first, long long count, std::uint64_t seed,
                             const std::function<void(long long, const EigenangleSet&)>& visit,
                             bool hermitian_route = true);

// Rows "sample_index,j,theta".
void write_eigenangle_csv_header(std::ostream& os);
void write_eigenangle_csv(std::ostream& os, long long sample_index, const EigenangleSet& set);

// Independent oracle: rejection sampling of the Weyl density
// prod_{j<k} (cos t_j - cos t_k)^2 prod_j sin^2 t_j on [0, pi]^N, N <= 3.
EigenangleSet sample_weyl_rejection(int N, std::mt19937_64& rng);

// Weyl density normalized against Lebesgue measure on [0, pi]^N (N <= 3).
double weyl_density(std::span<const double> thetas);

}  // namespace uspn
