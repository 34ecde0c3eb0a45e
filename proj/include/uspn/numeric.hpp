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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace uspn {

// Recursive pairwise summation; result depends only on the order of x.
double pairwise_sum(std::span<const double> x);

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

// Sample mean and standard error of the mean (n-1 variance).
MeanStderr mean_stderr(std::span<const double> x);

// SplitMix64 finalizer; decorrelates (seed, index) pairs into substream seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

// Polynomial extrapolation to h = 0 through the points (h_i, y_i).
double richardson_extrapolate(std::span<const double> h, std::span<const double> y);

// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

struct QuadratureNode {
  double x;
  double w;
};

// Nodes of 20-point Gauss-Legendre on `panels` equal subintervals of [a, b].
std::vector<QuadratureNode> gauss_panel_nodes(double a, double b, int panels);

// 20-point Gauss-Legendre on each of `panels` equal subintervals of [a, b].
template <class F>
double gauss_panels(F&& f, double a, double b, int panels) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) acc += rule::integrate(f, a + p * h, a + (p + 1) * h);
  return acc;
}

}  // namespace uspn
