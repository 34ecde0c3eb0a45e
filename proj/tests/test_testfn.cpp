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

#include "uspn/errors.hpp"
#include "uspn/testfn.hpp"

using namespace uspn;

namespace {

constexpr double kPi = std::numbers::pi;

// f(z) = 2 int_0^sigma fhat(u) cos(2 pi z u) du by adaptive quadrature.
cplx inverse_fourier(const TestFunction& fn, cplx z) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto re = [&](double u) { return fn.fhat(u) * std::cos(2.0 * kPi * z * u).real(); };
  auto im = [&](double u) { return fn.fhat(u) * std::cos(2.0 * kPi * z * u).imag(); };
  const double s = fn.sigma();
  return 2.0 * cplx(GK::integrate(re, 0.0, s, 20, 1e-13), GK::integrate(im, 0.0, s, 20, 1e-13));
}

std::vector<TestFunction> family() {
  return {make_triangle(0.9),          make_triangle(1.0),
          make_triangle(1.7),          make_raised_cosine(0.6),
          make_raised_cosine(1.3),     make_piecewise_polynomial(1.2, {0.5, 0.25, 0.25}),
          make_piecewise_polynomial(0.8, {0.0, 1.0})};
}

}  // namespace

TEST(TestFunction, TriangleBasics) {
  const auto f = make_triangle(0.9);
  EXPECT_DOUBLE_EQ(f.fhat(0.0), 1.0);
  EXPECT_EQ(f.fhat(0.9), 0.0);
  EXPECT_NEAR(f(0.0), 0.9, 1e-15);
  EXPECT_NEAR(integral_f(f), 1.0, 1e-15);
  EXPECT_NEAR(integral_fhat(f), 0.9, 1e-15);
}

TEST(TestFunction, TriangleZerosAtIntegers) {
  const auto f = make_triangle(1.0);
  EXPECT_NEAR(std::abs(eval_f(f, cplx(0.0, 0.0)) - 1.0), 0.0, 1e-15);
  for (int k = 1; k <= 6; ++k) {
    EXPECT_NEAR(std::abs(eval_f(f, cplx(k, 0.0))), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(eval_f(f, cplx(-k, 0.0))), 0.0, 1e-14);
  }
}

TEST(TestFunction, FourierInversionRealGrid) {
  for (const auto& f : family()) {
    for (int i = 0; i < 100; ++i) {
      const double x = -6.0 + 12.0 * i / 99.0 + 1e-3;
      EXPECT_NEAR(f(x), inverse_fourier(f, cplx(x, 0.0)).real(), 1e-8)
          << to_string(f.profile().kind()) << " x=" << x;
    }
  }
}

TEST(TestFunction, FourierInversionComplexGrid) {
  for (const auto& f : family()) {
    for (int i = 0; i < 20; ++i) {
      const cplx z(-3.0 + 0.31 * i, -0.8 + 0.083 * i);
      const cplx ref = inverse_fourier(f, z);
      EXPECT_NEAR(std::abs(eval_f(f, z) - ref), 0.0, 1e-8 * std::max(1.0, std::abs(ref)))
          << to_string(f.profile().kind()) << " z=" << z;
    }
    const cplx z(0.5, 0.5);
    EXPECT_NEAR(std::abs(eval_f(f, z) - inverse_fourier(f, z)), 0.0, 1e-8);
  }
}

TEST(TestFunction, RemovableSingularityThreshold) {
  for (const auto& f : family()) {
    for (double r : {0.5e-4, 0.99e-4, 1.01e-4, 2e-4, 1e-3}) {
      const cplx z = cplx(r, 0.3 * r) / f.sigma();
      EXPECT_NEAR(std::abs(eval_f(f, z) - inverse_fourier(f, z)), 0.0, 1e-12);
    }
  }
}

TEST(TestFunction, RaisedCosineNearInteriorPoles) {
  const auto f = make_raised_cosine(0.75);
  for (double d : {-1e-3, -1e-9, 0.0, 1e-9, 1e-3}) {
    const double x = (1.0 + d) / (2.0 * 0.75);
    EXPECT_NEAR(f(x), inverse_fourier(f, cplx(x, 0.0)).real(), 1e-12);
    EXPECT_NEAR(f(-x), f(x), 1e-15);
  }
}

TEST(TestFunction, EvennessAndSupport) {
  for (const auto& f : family()) {
    for (int i = 0; i <= 200; ++i) {
      const double x = 0.037 * i;
      EXPECT_EQ(f(x), f(-x));
      const double u = 0.0123 * i;
      EXPECT_EQ(f.fhat(u), f.fhat(-u));
      if (u >= f.sigma()) EXPECT_EQ(f.fhat(u), 0.0);
    }
    EXPECT_EQ(f.fhat(f.sigma()), 0.0);
    const cplx z(1.3, 0.4);
    EXPECT_NEAR(std::abs(eval_f(f, std::conj(z)) - std::conj(eval_f(f, z))), 0.0, 1e-15);
  }
}

TEST(TestFunction, HorizontalStripDecay) {
  for (const auto& f : family()) {
    const int p = f.profile().decay_exponent();
    double worst = 0.0;
    for (double x = 50.0; x < 5000.0; x *= 1.37)
      worst = std::max(worst, std::abs(eval_f(f, cplx(x, 0.2))) * std::pow(x, p));
    EXPECT_LT(worst, 10.0) << to_string(f.profile().kind());
  }
}

TEST(TestFunction, RealLineEnvelope) {
  for (const auto& f : family()) {
    const double v = f.profile().derivative_variation();
    for (double x = 0.05; x < 400.0; x *= 1.013)
      EXPECT_LE(std::abs(f(x)), v / (4 * kPi * kPi * x * x) * (1 + 1e-12)) << x;
  }
}

TEST(TestFunction, AntiderivativesMatchQuadrature) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (const auto& f : family()) {
    const auto& p = f.profile();
    for (double frac : {0.0, 0.2, 0.55, 0.9, 1.0, 1.3}) {
      const double u = frac * p.sigma();
      const double top = std::min(u, p.sigma());
      const double a = GK::integrate([&](double t) { return p(t); }, 0.0, top, 15, 1e-14);
      const double m = GK::integrate([&](double t) { return t * p(t); }, 0.0, top, 15, 1e-14);
      EXPECT_NEAR(p.antiderivative(u), a, 1e-13);
      EXPECT_NEAR(p.first_moment(u), m, 1e-13);
    }
    EXPECT_NEAR(integral_fhat(f), f(0.0), 1e-12);
  }
}

TEST(TestFunction, AbsUPairIntegral) {
  EXPECT_NEAR(integral_abs_u_pair(make_triangle(1.0), make_triangle(1.0)), 1.0 / 6.0, 1e-14);
  // Symbolic value for triangles with sa <= sb: sa^2/3 - sa^3/(6 sb).
  for (auto [sa, sb] : {std::pair{0.3, 0.7}, {0.7, 0.3}, {1.2, 1.9}, {0.5, 0.5}}) {
    const double lo = std::min(sa, sb), hi = std::max(sa, sb);
    EXPECT_NEAR(integral_abs_u_pair(make_triangle(sa), make_triangle(sb)),
                lo * lo / 3.0 - lo * lo * lo / (6.0 * hi), 1e-14);
  }
}

TEST(TestFunction, PolynomialProfileReproducesTriangle) {
  const auto tri = make_triangle(1.1);
  const auto poly = make_piecewise_polynomial(1.1, {1.0});
  for (const cplx z : {cplx(0.0, 0.0), cplx(0.3, 0.1), cplx(2.7, -0.4), cplx(40.0, 0.5)}) {
    EXPECT_NEAR(std::abs(eval_f(tri, z) - eval_f(poly, z)), 0.0, 1e-11 * (1 + std::abs(eval_f(tri, z))));
  }
  EXPECT_NEAR(integral_fhat(poly), 1.1, 1e-14);
}

TEST(TestFunction, JsonRoundTrip) {
  for (const auto& f : family()) {
    const auto j = to_json(f);
    EXPECT_EQ(test_function_from_json(j), f);
  }
  const auto f = test_function_from_json(nlohmann::json::parse(R"({"kind":"triangle","sigma":0.9})"));
  EXPECT_EQ(f.sigma(), 0.9);
  EXPECT_THROW(test_function_from_json(nlohmann::json::parse(R"({"kind":"box","sigma":1})")),
               DomainError);
  EXPECT_THROW(make_triangle(0.0), DomainError);
  EXPECT_THROW(make_triangle(-1.0), DomainError);
}

TEST(TestFunctionProduct, SupportClass) {
  EXPECT_EQ(TestFunctionProduct({make_triangle(0.4), make_triangle(0.5)}).support_class(), 1);
  EXPECT_EQ(TestFunctionProduct({make_triangle(0.5), make_triangle(0.5)}).support_class(), 1);
  EXPECT_EQ(TestFunctionProduct({make_triangle(1.2), make_triangle(0.5)}).support_class(), 2);
  EXPECT_EQ(TestFunctionProduct({make_triangle(1.2), make_triangle(1.2)}).support_class(), 3);
  EXPECT_THROW(TestFunctionProduct({make_triangle(1.5), make_triangle(1.5)}), DomainError);
  EXPECT_THROW(TestFunctionProduct(std::vector<TestFunction>{}), DomainError);
  const auto big = TestFunctionProduct::unrestricted({make_triangle(2.0), make_triangle(1.5)});
  EXPECT_FALSE(big.support_class().has_value());
  EXPECT_NEAR(big.total_support(), 3.5, 1e-15);
}
