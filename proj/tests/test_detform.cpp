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

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "uspn/detform.hpp"
#include "uspn/errors.hpp"
#include "uspn/haar.hpp"
#include "uspn/numeric.hpp"

using namespace uspn;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact folded one-level mean from E Tr U^m = -1 (m even, 0 < m <= 2N), else 0:
// fhat(0) - (1/N) sum_{l=1}^{N} fhat(l/N).
double exact_folded_one_level(int N, const TestFunction& f) {
  double acc = 0.0;
  for (int l = 1; l <= N; ++l) acc += f.fhat(static_cast<double>(l) / N);
  return f.fhat(0.0) - acc / N;
}

}  // namespace

TEST(Detform, SKernelValues) {
  for (long M : {1L, 3L, 5L, 129L}) EXPECT_NEAR(s_kernel(M, 0.0), M / (2 * kPi), 1e-15);
  EXPECT_NEAR(s_kernel(5, kPi), 1.0 / (2 * kPi), 1e-15);
  for (long M : {3L, 7L, 65L}) {
    EXPECT_NEAR(s_kernel(M, 2 * kPi), M / (2 * kPi), 1e-12);
    EXPECT_NEAR(s_kernel(M, -4 * kPi), M / (2 * kPi), 1e-12);
  }
  // Even M flips sign at odd multiples of 2 pi.
  EXPECT_NEAR(s_kernel(4, 2 * kPi), -4 / (2 * kPi), 1e-12);
  // Continuity across the removable points.
  for (long M : {5L, 33L}) {
    for (double x0 : {0.0, 2 * kPi}) {
      for (double e : {1e-9, 1e-7, 1e-5, 1e-3}) {
        const double direct = std::sin(M * (x0 + e) / 2) / (2 * kPi * std::sin((x0 + e) / 2));
        EXPECT_NEAR(s_kernel(M, x0 + e), direct, 1e-6 * M);
      }
    }
  }
}

TEST(Detform, KernelExamples) {
  const KernelSpec one{KernelVariant::finite_N, 1, SignConvention::standard_minus};
  EXPECT_NEAR(kernel(one, kPi / 2, kPi / 2), 4 / (2 * kPi), 1e-14);
  const KernelSpec lim{KernelVariant::scaled_limit, 0, SignConvention::standard_minus};
  EXPECT_NEAR(kernel(lim, 0.0, 0.0), 0.0, 1e-15);
  for (double x : {0.1, 0.37, 1.0, 2.5, 10.25})
    EXPECT_NEAR(kernel(lim, x, x), 1 - std::sin(2 * kPi * x) / (2 * kPi * x), 1e-14);
  const KernelSpec plus{KernelVariant::scaled_limit, 0, SignConvention::paper_plus};
  EXPECT_NEAR(kernel(plus, 0.0, 0.0), 2.0, 1e-14);
}

TEST(Detform, KernelSymmetryAndCoincidentDeterminant) {
  for (int N : {1, 4, 17}) {
    const KernelSpec spec{KernelVariant::finite_N, N, SignConvention::standard_minus};
    for (int i = 0; i <= 30; ++i)
      for (int j = 0; j <= 30; ++j) {
        const double x = kPi * i / 30, y = kPi * j / 30;
        EXPECT_EQ(kernel(spec, x, y), kernel(spec, y, x));
      }
    for (double t : {0.3, 1.1, 2.9}) EXPECT_NEAR(pair_correlation(spec, t, t), 0.0, 1e-12);
  }
}

TEST(Detform, TraceIdentity) {
  for (int N : {1, 2, 3, 8, 16, 64, 128}) EXPECT_NEAR(trace_integral(N), N, 1e-8) << N;
}

TEST(Detform, FoldedWeightFourierMatchesImages) {
  for (int N : {4, 16}) {
    for (const auto& f : {make_triangle(0.9), make_raised_cosine(1.4)}) {
      const auto exact = folded_weight(N, f, -1);
      const auto images = folded_weight(N, f, 400);
      const double bound = image_tail_bound(N, f, 400);
      for (double t : {0.0, 0.2, 1.3, 3.0, kPi}) EXPECT_NEAR(exact(t), images(t), bound / N + 1e-12);
    }
  }
}

TEST(Detform, FoldedOneLevelMatchesTraceMomentFormula) {
  for (int N : {1, 3, 8, 32, 64}) {
    for (const auto& f : {make_triangle(0.9), make_triangle(1.7), make_raised_cosine(0.6)}) {
      EXPECT_NEAR(one_level_folded(N, f, -1).value, exact_folded_one_level(N, f), 1e-9)
          << "N=" << N << " sigma=" << f.sigma();
    }
  }
}

TEST(Detform, FoldedOneLevelMatchesMonteCarlo) {
  const auto f = make_triangle(0.9);
  const auto det = one_level_folded(32, f, 4);
  const auto mc = mc_n_level(32, TestFunctionProduct({f}), 20000, 17);
  EXPECT_LE(std::abs(det.value - mc.value), 3 * mc.std_error);
}

TEST(Detform, RawOneLevelConvergesAtRateOneOverN) {
  const auto f = make_triangle(0.9);
  const double limit = limit_one_level(f, SignConvention::standard_minus);
  std::vector<double> Ns, gaps;
  for (int N : {16, 32, 64, 128}) {
    const double v = one_level_finite_N(N, f).value;
    Ns.push_back(N);
    gaps.push_back(v - limit);
    if (N >= 64) EXPECT_LT(std::abs(v - limit), 2e-2);
  }
  const double slope = -loglog_slope(Ns, gaps);
  EXPECT_GE(slope, 0.7);
  EXPECT_LE(slope, 1.3);
}

TEST(Detform, LimitOneLevelAgainstRealSpaceQuadrature) {
  // Oracle: int_0^X f(x)(1 - sinc 2x) dx plus the averaged tail int_X^inf 1/(2 pi^2 sigma x^2).
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (double sigma : {0.5, 0.9, 1.6}) {
    const auto f = make_triangle(sigma);
    const double X = 2000.0 / sigma;
    double body = 0.0;
    for (double a = 0.0; a < X; a += 1.0 / sigma)
      body += GK::integrate([&](double x) { return f(x) * (1.0 - sine_kernel(2 * x)); }, a, a + 1.0 / sigma, 5, 1e-13);
    const double tail = 1.0 / (2 * kPi * kPi * sigma * X);
    EXPECT_NEAR(body + tail, limit_one_level(f, SignConvention::standard_minus), 1e-6);
  }
}

TEST(Detform, SignAudit) {
  // The plus sign contradicts the large-N limit of the finite kernel.
  const auto f = make_triangle(0.9);
  const double finite = one_level_finite_N(128, f).value;
  EXPECT_LT(std::abs(finite - limit_one_level(f, SignConvention::standard_minus)), 2e-2);
  EXPECT_GT(std::abs(finite - limit_one_level(f, SignConvention::paper_plus)), 0.3);
}

TEST(Detform, PairStatistics) {
  const auto f = make_triangle(0.3);
  const int N = 64;
  const double distinct = distinct_pair_density_finite_N(N, f, f);
  const double full = full_pair_from_distinct(N, f, f);
  EXPECT_LE(distinct, full);
  // Oracle: the two-level limit for total support below one,
  // (int f - fhat_mass/2)^2 + 2 int |u| fhat^2.
  const double one = integral_f(f) - 0.5 * integral_fhat(f);
  const double limit = one * one + 2 * integral_abs_u_pair(f, f);
  EXPECT_NEAR(two_level_folded(N, f, f, -1).value, limit, 2e-2);
  EXPECT_NEAR(two_level_folded(N, f, f, 4).value, limit, 2e-2);
}

TEST(Detform, FoldedTwoLevelMatchesMonteCarlo) {
  const auto f1 = make_triangle(0.7), f2 = make_raised_cosine(0.5);
  const int N = 12;
  const auto det = two_level_folded(N, f1, f2, 4);
  const auto mc = mc_n_level(N, TestFunctionProduct({f1, f2}), 20000, 3);
  EXPECT_LE(std::abs(det.value - mc.value), 3 * mc.std_error + 10 * det.std_error);
}

TEST(Detform, Preconditions) {
  EXPECT_THROW(one_level_finite_N(0, make_triangle(1.0)), DomainError);
  EXPECT_THROW(one_level_finite_N(129, make_triangle(1.0)), DomainError);
  EXPECT_THROW(distinct_pair_density_finite_N(65, make_triangle(1.0), make_triangle(1.0)), DomainError);
  EXPECT_EQ(sign_convention_from_string("paper_plus"), SignConvention::paper_plus);
  EXPECT_THROW(sign_convention_from_string("plus"), DomainError);
}
