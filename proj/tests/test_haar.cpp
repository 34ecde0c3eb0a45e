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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stats_support.hpp"
#include "uspn/errors.hpp"
#include "uspn/haar.hpp"
#include "uspn/numeric.hpp"

using namespace uspn;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Haar, StructureInvariants) {
  for (int N : {1, 2, 3, 4, 8, 16, 32}) {
    const auto J = standard_skew_form(N);
    const auto I = Eigen::MatrixXcd::Identity(2 * N, 2 * N);
    for (std::uint64_t s = 0; s < 40; ++s) {
      const auto sample = sample_usp(N, 1000 * N + s);
      const auto& U = sample.matrix;
      EXPECT_LE(max_abs(U.adjoint() * U - I), 1e-10);
      EXPECT_LE(max_abs(U.transpose() * J * U - J), 1e-10);
      EXPECT_LE(std::abs(U.determinant() - 1.0), 1e-8);
      const auto set = eigenangles(sample);
      ASSERT_EQ(set.angles.size(), static_cast<std::size_t>(N));
      for (double t : set.angles) {
        EXPECT_GE(t, 0.0);
        EXPECT_LE(t, kPi);
      }
      EXPECT_TRUE(std::is_sorted(set.angles.begin(), set.angles.end()));
    }
  }
}

TEST(Haar, HermitianRouteMatchesGeneralEigensolver) {
  for (int N : {1, 5, 16, 64}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto sample = sample_usp(N, 77 + s);
      const auto a = eigenangles(sample);
      const auto b = eigenangles_hermitian(sample.matrix);
      for (int j = 0; j < N; ++j) EXPECT_NEAR(a.angles[j], b.angles[j], 1e-7);
    }
  }
}

TEST(Haar, ConstructedDiagonalInputs) {
  const std::vector<double> third(4, kPi / 3.0);
  for (double t : eigenangles(diagonal_usp(third)).angles) EXPECT_NEAR(t, kPi / 3.0, 1e-12);
  const std::vector<double> two{2.0, 0.5};
  const auto set = eigenangles(diagonal_usp(two));
  EXPECT_NEAR(set.angles[0], 0.5, 1e-14);
  EXPECT_NEAR(set.angles[1], 2.0, 1e-14);
  const auto h = eigenangles_hermitian(diagonal_usp(two));
  EXPECT_NEAR(h.angles[0], 0.5, 1e-12);
  EXPECT_NEAR(h.angles[1], 2.0, 1e-12);
  const auto eight = eigenangles(sample_usp(8, 3));
  EXPECT_EQ(eight.angles.size(), 8u);
}

TEST(Haar, EigenvaluePairingFailureIsReported) {
  Eigen::MatrixXcd U = diagonal_usp(std::vector<double>{0.5, 2.0});
  U(1, 1) = std::polar(1.0, 0.7);  // breaks the e^{+-i theta} pairing
  EXPECT_THROW(eigenangles(U), NumericalError);
  EXPECT_THROW(eigenangles_hermitian(U), NumericalError);
}

TEST(Haar, ExtendedAngleCaseTable) {
  const EigenangleSet set{2, {0.5, 2.0}};
  EXPECT_DOUBLE_EQ(extended_angle(set, 1), 0.5);
  EXPECT_DOUBLE_EQ(extended_angle(set, 2), 2.0);
  EXPECT_DOUBLE_EQ(extended_angle(set, -1), -0.5);
  EXPECT_DOUBLE_EQ(extended_angle(set, 3), 2.0 * kPi - 2.0);
  EXPECT_DOUBLE_EQ(extended_angle(set, 4), 2.0 * kPi - 0.5);
  EXPECT_DOUBLE_EQ(extended_angle(set, 5), 0.5 + 2.0 * kPi);
  EXPECT_THROW(extended_angle(set, 0), DomainError);
}

TEST(Haar, ExtendedSequenceIsTheOrderedUnionOfImages) {
  for (int N : {1, 2, 5}) {
    const auto set = eigenangles(sample_usp(N, 11 + N));
    // Oracle: list every +-theta_r + 2 pi k and sort.
    std::vector<double> positive;
    for (int k = -3; k <= 6; ++k)
      for (double t : set.angles)
        for (double v : {t + 2 * kPi * k, -t + 2 * kPi * k})
          if (v > 0.0) positive.push_back(v);
    std::sort(positive.begin(), positive.end());
    const long long count = 8LL * N;
    for (long long j = 1; j <= count; ++j) {
      EXPECT_NEAR(extended_angle(set, j), positive[j - 1], 1e-12) << "N=" << N << " j=" << j;
      EXPECT_EQ(extended_angle(set, -j), -extended_angle(set, j));
      if (j > 1) EXPECT_GT(extended_angle(set, j), extended_angle(set, j - 1));
    }
  }
}

TEST(Haar, EmpiricalNLevel) {
  const EigenangleSet set{2, {kPi / 2.0, kPi}};
  const auto tri = make_triangle(1.0);
  EXPECT_NEAR(empirical_n_level(set, TestFunctionProduct({tri}), 0), 0.0, 1e-15);

  const auto sample = eigenangles(sample_usp(16, 5));
  const auto f1 = make_triangle(0.7), f2 = make_raised_cosine(0.9);
  const double a = empirical_n_level(sample, TestFunctionProduct({f1}), 4);
  const double b = empirical_n_level(sample, TestFunctionProduct({f2}), 4);
  EXPECT_NEAR(empirical_n_level(sample, TestFunctionProduct({f1, f2}), 4), a * b, 1e-13 * std::abs(a * b));

  // Direct sum over the extended index set agrees with the folded sum.
  double direct = 0.0;
  const int K = 2;
  for (long long j = -32LL * (K + 1); j <= 32LL * (K + 1); ++j) {
    if (j == 0) continue;
    const long long period = (std::abs(j) - 1) / 32;
    if (period > K) continue;
    direct += f1(16.0 / kPi * extended_angle(sample, j));
  }
  const double folded = one_level_sum(sample, f1, K);
  // The folded sum uses images |k| <= K of both +-theta; the direct sum
  // covers the same multiset except the outermost reflected block.
  double extra = 0.0;
  for (double t : sample.angles)
    extra += f1(16.0 / kPi * (2 * kPi * (K + 1) - t)) + f1(16.0 / kPi * (-2 * kPi * (K + 1) + t));
  EXPECT_NEAR(direct, folded + extra, 1e-12);

  for (int N : {16, 32}) {
    const auto s = eigenangles(sample_usp(N, 9));
    for (double sigma : {0.3, 1.0}) {
      const auto f = make_triangle(sigma);
      const double diff = std::abs(one_level_sum(s, f, 3) - one_level_sum(s, f, 10));
      EXPECT_LE(diff, image_tail_bound(N, f, 3));
      EXPECT_GT(diff, 0.05 * image_tail_bound(N, f, 3));
    }
  }
}

TEST(Haar, WeylDensityIsNormalized) {
  using GL = boost::math::quadrature::gauss<double, 30>;
  EXPECT_NEAR(GL::integrate([](double t) { return weyl_density(std::vector{t}); }, 0.0, kPi), 1.0, 1e-12);
  auto inner2 = [](double a) {
    return gauss_panels([&](double b) { return weyl_density(std::vector{a, b}); }, 0.0, kPi, 4);
  };
  EXPECT_NEAR(gauss_panels(inner2, 0.0, kPi, 4), 1.0, 1e-12);
}

TEST(Haar, TraceMomentsAgainstWeylQuadrature) {
  // Oracle: moments of Tr U and Tr U^2 at N = 2 by quadrature of the Weyl density.
  auto moment = [](int m) {
    auto inner = [&](double a) {
      return gauss_panels(
          [&](double b) { return (2 * std::cos(m * a) + 2 * std::cos(m * b)) * weyl_density(std::vector{a, b}); },
          0.0, kPi, 4);
    };
    return gauss_panels(inner, 0.0, kPi, 4);
  };
  EXPECT_NEAR(moment(1), 0.0, 1e-12);
  EXPECT_NEAR(moment(2), -1.0, 1e-12);

  const int N = 16;
  std::vector<double> tr1, tr2;
  for_each_eigenangle_set(N, 0, 10000, 2024, [&](long long, const EigenangleSet& set) {
    double a = 0, b = 0;
    for (double t : set.angles) {
      a += 2 * std::cos(t);
      b += 2 * std::cos(2 * t);
    }
    tr1.push_back(a);
    tr2.push_back(b);
  });
  const auto m1 = mean_stderr(tr1), m2 = mean_stderr(tr2);
  EXPECT_LE(std::abs(m1.mean - 0.0), 3 * m1.std_error);
  EXPECT_LE(std::abs(m2.mean + 1.0), 3 * m2.std_error);
}

TEST(Haar, SingleAngleLawKolmogorovSmirnov) {
  std::vector<double> theta;
  for_each_eigenangle_set(1, 0, 10000, 99, [&](long long, const EigenangleSet& s) { theta.push_back(s.angles[0]); });
  const double p = uspn::testing::ks_one_sample_pvalue(
      theta, [](double t) { return (2 * t - std::sin(2 * t)) / (2 * kPi); });
  EXPECT_GT(p, 0.01);
}

TEST(Haar, AgreesWithWeylRejectionSampler) {
  for (int N : {2, 3}) {
    std::mt19937_64 rng(5 + N);
    std::vector<double> weyl_min, weyl_sum, haar_min, haar_sum;
    for (int i = 0; i < 5000; ++i) {
      const auto s = sample_weyl_rejection(N, rng);
      weyl_min.push_back(s.angles.front());
      double c = 0;
      for (double t : s.angles) c += std::cos(t);
      weyl_sum.push_back(c);
    }
    for_each_eigenangle_set(N, 0, 5000, 31 + N, [&](long long, const EigenangleSet& s) {
      haar_min.push_back(s.angles.front());
      double c = 0;
      for (double t : s.angles) c += std::cos(t);
      haar_sum.push_back(c);
    });
    EXPECT_GT(uspn::testing::ks_two_sample_pvalue(weyl_min, haar_min), 0.01) << "N=" << N;
    EXPECT_GT(uspn::testing::ks_two_sample_pvalue(weyl_sum, haar_sum), 0.01) << "N=" << N;
  }
}

TEST(Haar, MonteCarloReproducibility) {
  const TestFunctionProduct prod({make_triangle(0.9)});
  const auto two = mc_n_level(8, prod, 2, 1);
  EXPECT_TRUE(std::isfinite(two.std_error));
  EXPECT_GT(two.std_error, 0.0);
  EXPECT_THROW(mc_n_level(8, prod, 1, 1), DomainError);

  MonteCarloOptions one_worker, three_workers;
  one_worker.workers = 1;
  three_workers.workers = 3;
  const auto a = mc_n_level(12, prod, 301, 42, one_worker);
  const auto b = mc_n_level(12, prod, 301, 42, three_workers);
  const auto c = mc_n_level(12, prod, 301, 42, one_worker);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.value, c.value);
  EXPECT_EQ(a.method, Method::monte_carlo);
  EXPECT_EQ(a.samples, 301);
}

TEST(Haar, MonteCarloOneLevelAtN32) {
  // Limit value 1 - 0.45; finite-size allowance 0.5/N.
  const TestFunctionProduct prod({make_triangle(0.9)});
  const auto est = mc_n_level(32, prod, 100000, 7);
  EXPECT_LE(std::abs(est.value - 0.55), 3 * est.std_error + 0.5 / 32);
}

TEST(Haar, EigenangleCsv) {
  std::ostringstream os;
  write_eigenangle_csv_header(os);
  write_eigenangle_csv(os, 3, EigenangleSet{2, {0.5, 2.0}});
  EXPECT_EQ(os.str(), "sample_index,j,theta\n3,1,0.5\n3,2,2\n");
}
