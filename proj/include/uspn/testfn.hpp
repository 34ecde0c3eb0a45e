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

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace uspn {

using cplx = std::complex<double>;

enum class ProfileKind { triangle, raised_cosine, piecewise_polynomial };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

// Even, compactly supported Fourier transform fhat on [-sigma, sigma].
//
//   triangle:             fhat(u) = 1 - |u|/sigma
//   raised_cosine:        fhat(u) = cos^2(pi u / (2 sigma))
//   piecewise_polynomial: fhat(u) = sum_j c_j (1 - |u|/sigma)^(j+1)
//
// Convention: fhat(u) = int f(x) e^{-2 pi i x u} dx.
class FourierProfile {
 public:
  static FourierProfile triangle(double sigma);
  static FourierProfile raised_cosine(double sigma);
  static FourierProfile piecewise_polynomial(double sigma,
                                             std::vector<double> coefficients);

  ProfileKind kind() const noexcept { return kind_; }
  double sigma() const noexcept { return sigma_; }
  const std::vector<double>& coefficients() const noexcept { return coeffs_; }

  double operator()(double u) const;

  // int_0^u fhat(t) dt and int_0^u t fhat(t) dt, with u clamped to [0, sigma].
  double antiderivative(double u) const;
  double first_moment(double u) const;

  // int_R fhat.
  double total_mass() const { return 2.0 * antiderivative(sigma_); }

  // Exponent p with |f(x + iy)| = O(|x|^-p) on horizontal lines.
  int decay_exponent() const;

  // Total variation of fhat' over R, jumps included. Then
  // |f(x)| <= derivative_variation() / (4 pi^2 x^2) for real x.
  double derivative_variation() const;

  nlohmann::json to_json() const;
  static FourierProfile from_json(const nlohmann::json& j);

  bool operator==(const FourierProfile&) const = default;

 private:
  FourierProfile(ProfileKind kind, double sigma, std::vector<double> coeffs);

  ProfileKind kind_;
  double sigma_;
  std::vector<double> coeffs_;
};

// Entire test function f with Fourier transform given by a profile.
class TestFunction {
 public:
  explicit TestFunction(FourierProfile profile) : profile_(std::move(profile)) {}

  const FourierProfile& profile() const noexcept { return profile_; }
  double sigma() const noexcept { return profile_.sigma(); }
  double fhat(double u) const { return profile_(u); }

  cplx operator()(cplx z) const;
  double operator()(double x) const;

  bool operator==(const TestFunction&) const = default;

 private:
  FourierProfile profile_;
};

TestFunction make_triangle(double sigma);
TestFunction make_raised_cosine(double sigma);
TestFunction make_piecewise_polynomial(double sigma, std::vector<double> coefficients);

cplx eval_f(const TestFunction& fn, cplx z);

// int_R f = fhat(0).
double integral_f(const TestFunction& fn);
// int_R fhat = f(0).
double integral_fhat(const TestFunction& fn);
// int_{-w}^{w} fhat.
double integral_fhat_window(const TestFunction& fn, double w);
// int_a^b fhat for 0 <= a <= b.
double integral_fhat_between(const TestFunction& fn, double a, double b);
// int_R |u| fhat_a(u) fhat_b(u) du.
double integral_abs_u_pair(const TestFunction& fa, const TestFunction& fb);

// Ordered product f_1(x_1) ... f_n(x_n).
class TestFunctionProduct {
 public:
  // Rejects total support >= 3, where no closed form applies.
  explicit TestFunctionProduct(std::vector<TestFunction> factors);
  // No support restriction; for sampling-only use.
  static TestFunctionProduct unrestricted(std::vector<TestFunction> factors);

  std::size_t size() const noexcept { return factors_.size(); }
  const TestFunction& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<TestFunction>& factors() const noexcept { return factors_; }
  std::span<const TestFunction> span() const noexcept { return factors_; }

  double total_support() const noexcept { return total_support_; }
  // Smallest q in {1,2,3} with total_support <= q; empty above 3.
  std::optional<int> support_class() const noexcept;

  std::vector<double> sigmas() const;

 private:
  struct Unchecked {};
  TestFunctionProduct(std::vector<TestFunction> factors, Unchecked);

  std::vector<TestFunction> factors_;
  double total_support_ = 0.0;
};

TestFunction test_function_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TestFunction& fn);

}  // namespace uspn
