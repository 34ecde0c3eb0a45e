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

#include "uspn/estimate.hpp"
#include "uspn/testfn.hpp"

namespace uspn {

enum class KernelVariant { finite_N, scaled_limit };
enum class SignConvention { paper_plus, standard_minus };

struct KernelSpec {
  KernelVariant variant = KernelVariant::finite_N;
  int N = 1;
  SignConvention sign = SignConvention::standard_minus;
};

std::string to_string(SignConvention s);
SignConvention sign_convention_from_string(const std::string& name);

// S_M(x) = sin(M x / 2) / (2 pi sin(x / 2)), continuous at x in 2 pi Z.
double s_kernel(long M, double x);

// Scaled sine kernel sin(pi x) / (pi x).
double sine_kernel(double x);

// finite_N: S_{2N+1}(y - x) - S_{2N+1}(y + x) on [0, pi]^2.
// scaled_limit: sine_kernel(y - x) -+ sine_kernel(y + x), sign from spec.sign.
double kernel(const KernelSpec& spec, double x, double y);

// K(x, x) K(y, y) - K(x, y)^2.
double pair_correlation(const KernelSpec& spec, double x, double y);

// Weight on eigenangles theta in [0, pi].
using AngleWeight = std::function<double(double)>;

// theta -> f(N theta / pi).
AngleWeight raw_weight(int N, const TestFunction& f);

// theta -> sum_{|k| <= K} [f(N(theta + 2k pi)/pi) + f(N(2k pi - theta)/pi)];
// K_max < 0 sums all images through the finite Fourier series
// (1/N) sum_m fhat(m / 2N) cos(m theta).
AngleWeight folded_weight(int N, const TestFunction& f, int K_max);

struct QuadratureValue {
  double value = 0.0;
  double error = 0.0;
};

// int_0^pi w(theta) K(theta, theta) dtheta, panel Gauss-Legendre with a
// panel-doubling error estimate.
QuadratureValue one_level_integral(int N, const AngleWeight& w);

// int int w1 w2 det_2 K over [0, pi]^2.
QuadratureValue distinct_pair_integral(int N, const AngleWeight& w1, const AngleWeight& w2);

// Unfolded one-level density: each eigenangle in [0, pi] counted once.
DensityEstimate one_level_finite_N(int N, const TestFunction& f);

// Folded one-level statistic, comparable to the Monte Carlo sum over signed
// indices and images.
DensityEstimate one_level_folded(int N, const TestFunction& f, int K_max);

double distinct_pair_density_finite_N(int N, const TestFunction& f1, const TestFunction& f2);
double full_pair_from_distinct(int N, const TestFunction& f1, const TestFunction& f2);

// Folded two-level statistic: distinct pairs plus the diagonal F1 F2 term.
DensityEstimate two_level_folded(int N, const TestFunction& f1, const TestFunction& f2,
                                 int K_max);

// int_0^inf f(x) K_lim(x, x) dx = fhat(0)/2 -+ (1/4) int_{-1}^{1} fhat.
double limit_one_level(const TestFunction& f, SignConvention sign);

// int_0^pi K(theta, theta) dtheta (should equal N).
double trace_integral(int N);

}  // namespace uspn
