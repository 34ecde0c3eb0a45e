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

#include "uspn/testfn.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "uspn/errors.hpp"

namespace uspn {
namespace {

constexpr double kPi = std::numbers::pi;

using lcplx = std::complex<long double>;

// sin(pi t) / (pi t), with a Taylor expansion around the removable point.
cplx sinc(cplx t) {
  const cplx x = kPi * t;
  if (std::abs(t) < 1e-4) {
    const cplx x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return std::sin(x) / x;
}

double sinc_real(double t) {
  const double x = kPi * t;
  if (std::abs(t) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return std::sin(x) / x;
}

// I_k(w) = int_0^1 (1-s)^k cos(w s) ds for k = 0..kmax.
std::vector<cplx> cosine_moments(cplx w, int kmax) {
  std::vector<cplx> out(kmax + 1);
  if (std::abs(w) < kmax + 6.0) {
    const lcplx wl(w.real(), w.imag());
    const lcplx w2 = wl * wl;
    for (int k = 0; k <= kmax; ++k) {
      lcplx term = 1.0L / (k + 1.0L);
      lcplx sum = term;
      for (int m = 0; m < 400; ++m) {
        term *= -w2 / ((2.0L * m + k + 2.0L) * (2.0L * m + k + 3.0L));
        sum += term;
        if (std::abs(term) < 1e-21L * std::abs(sum) && m > 2) break;
      }
      out[k] = cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }
    return out;
  }
  cplx sk = (1.0 - std::cos(w)) / w;
  out[0] = std::sin(w) / w;
  for (int k = 1; k <= kmax; ++k) {
    const cplx ik = static_cast<double>(k) / w * sk;
    sk = 1.0 / w - static_cast<double>(k) / w * out[k - 1];
    out[k] = ik;
  }
  return out;
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw DomainError("profile support sigma must be positive and finite");
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::triangle: return "triangle";
    case ProfileKind::raised_cosine: return "raised-cosine";
    case ProfileKind::piecewise_polynomial: return "piecewise-polynomial";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "triangle") return ProfileKind::triangle;
  if (name == "raised-cosine" || name == "raised_cosine") return ProfileKind::raised_cosine;
  if (name == "piecewise-polynomial" || name == "piecewise_polynomial")
    return ProfileKind::piecewise_polynomial;
  throw DomainError("unknown profile kind '" + name + "'");
}

FourierProfile::FourierProfile(ProfileKind kind, double sigma, std::vector<double> coeffs)
    : kind_(kind), sigma_(sigma), coeffs_(std::move(coeffs)) {}

FourierProfile FourierProfile::triangle(double sigma) {
  check_sigma(sigma);
  return FourierProfile(ProfileKind::triangle, sigma, {});
}

FourierProfile FourierProfile::raised_cosine(double sigma) {
  check_sigma(sigma);
  return FourierProfile(ProfileKind::raised_cosine, sigma, {});
}

FourierProfile FourierProfile::piecewise_polynomial(double sigma,
                                                    std::vector<double> coefficients) {
  check_sigma(sigma);
  if (coefficients.empty())
    throw DomainError("piecewise-polynomial profile needs at least one coefficient");
  for (double c : coefficients)
    if (!std::isfinite(c)) throw DomainError("non-finite polynomial coefficient");
  return FourierProfile(ProfileKind::piecewise_polynomial, sigma, std::move(coefficients));
}

double FourierProfile::operator()(double u) const {
  const double a = std::abs(u);
  if (a >= sigma_) return 0.0;
  switch (kind_) {
    case ProfileKind::triangle:
      return 1.0 - a / sigma_;
    case ProfileKind::raised_cosine: {
      const double c = std::cos(0.5 * kPi * a / sigma_);
      return c * c;
    }
    case ProfileKind::piecewise_polynomial: {
      const double s = 1.0 - a / sigma_;
      double acc = 0.0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = (acc + *it) * s;
      return acc;
    }
  }
  return 0.0;
}

double FourierProfile::antiderivative(double u) const {
  u = std::clamp(u, 0.0, sigma_);
  switch (kind_) {
    case ProfileKind::triangle:
      return u - u * u / (2.0 * sigma_);
    case ProfileKind::raised_cosine:
      return 0.5 * u + sigma_ / (2.0 * kPi) * std::sin(kPi * u / sigma_);
    case ProfileKind::piecewise_polynomial: {
      const double s = 1.0 - u / sigma_;
      double acc = 0.0;
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        const double k = static_cast<double>(j) + 1.0;
        acc += coeffs_[j] * sigma_ * (1.0 - std::pow(s, k + 1.0)) / (k + 1.0);
      }
      return acc;
    }
  }
  return 0.0;
}

double FourierProfile::first_moment(double u) const {
  u = std::clamp(u, 0.0, sigma_);
  switch (kind_) {
    case ProfileKind::triangle:
      return u * u / 2.0 - u * u * u / (3.0 * sigma_);
    case ProfileKind::raised_cosine: {
      const double r = sigma_ / kPi;
      const double x = u / r;
      return u * u / 4.0 + 0.5 * (u * r * std::sin(x) + r * r * (std::cos(x) - 1.0));
    }
    case ProfileKind::piecewise_polynomial: {
      const double s = 1.0 - u / sigma_;
      double acc = 0.0;
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        const double k = static_cast<double>(j) + 1.0;
        const double at1 = 1.0 / (k + 1.0) - 1.0 / (k + 2.0);
        const double ats = std::pow(s, k + 1.0) / (k + 1.0) - std::pow(s, k + 2.0) / (k + 2.0);
        acc += coeffs_[j] * sigma_ * sigma_ * (at1 - ats);
      }
      return acc;
    }
  }
  return 0.0;
}

int FourierProfile::decay_exponent() const {
  return kind_ == ProfileKind::raised_cosine ? 3 : 2;
}

double FourierProfile::derivative_variation() const {
  switch (kind_) {
    case ProfileKind::triangle: return 4.0 / sigma_;
    case ProfileKind::raised_cosine: return 2.0 * kPi / sigma_;
    case ProfileKind::piecewise_polynomial: {
      // fhat'(u) = -(1/sigma) sum k c_k s^(k-1), s = 1 - u/sigma on (0, sigma).
      auto d1 = [&](double s) {
        double acc = 0.0;
        for (std::size_t j = 0; j < coeffs_.size(); ++j)
          acc += (j + 1.0) * coeffs_[j] * std::pow(s, static_cast<double>(j));
        return -acc / sigma_;
      };
      auto d2 = [&](double s) {
        double acc = 0.0;
        for (std::size_t j = 1; j < coeffs_.size(); ++j)
          acc += (j + 1.0) * j * coeffs_[j] * std::pow(s, j - 1.0);
        return std::abs(acc) / (sigma_ * sigma_);
      };
      const double interior =
          boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
              [&](double u) { return d2(1.0 - u / sigma_); }, 0.0, sigma_, 12, 1e-12);
      return 2.0 * std::abs(d1(1.0)) + 2.0 * std::abs(d1(0.0)) + 2.0 * interior;
    }
  }
  return 0.0;
}

nlohmann::json FourierProfile::to_json() const {
  nlohmann::json j{{"kind", to_string(kind_)}, {"sigma", sigma_}};
  if (kind_ == ProfileKind::piecewise_polynomial) j["coefficients"] = coeffs_;
  return j;
}

FourierProfile FourierProfile::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("sigma"))
    throw DomainError("profile needs 'kind' and 'sigma'");
  const auto kind = profile_kind_from_string(j.at("kind").get<std::string>());
  const double sigma = j.at("sigma").get<double>();
  switch (kind) {
    case ProfileKind::triangle: return triangle(sigma);
    case ProfileKind::raised_cosine: return raised_cosine(sigma);
    case ProfileKind::piecewise_polynomial:
      if (!j.contains("coefficients"))
        throw DomainError("piecewise-polynomial profile needs 'coefficients'");
      return piecewise_polynomial(sigma, j.at("coefficients").get<std::vector<double>>());
  }
  throw DomainError("unreachable profile kind");
}

cplx TestFunction::operator()(cplx z) const {
  const double s = profile_.sigma();
  switch (profile_.kind()) {
    case ProfileKind::triangle: {
      const cplx v = sinc(s * z);
      return s * v * v;
    }
    case ProfileKind::raised_cosine: {
      const cplx t = 2.0 * s * z;
      if (std::abs(t) < 2.0) return s * (sinc(t) + 0.5 * (sinc(t + 1.0) + sinc(t - 1.0)));
      return s * sinc(t) / (1.0 - t * t);
    }
    case ProfileKind::piecewise_polynomial: {
      const auto& c = profile_.coefficients();
      const auto moments = cosine_moments(2.0 * kPi * s * z, static_cast<int>(c.size()));
      cplx acc = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) acc += c[j] * moments[j + 1];
      return 2.0 * s * acc;
    }
  }
  return 0.0;
}

double TestFunction::operator()(double x) const {
  const double s = profile_.sigma();
  switch (profile_.kind()) {
    case ProfileKind::triangle: {
      const double v = sinc_real(s * x);
      return s * v * v;
    }
    case ProfileKind::raised_cosine: {
      const double t = 2.0 * s * x;
      if (std::abs(t) < 2.0)
        return s * (sinc_real(t) + 0.5 * (sinc_real(t + 1.0) + sinc_real(t - 1.0)));
      return s * sinc_real(t) / (1.0 - t * t);
    }
    case ProfileKind::piecewise_polynomial:
      return (*this)(cplx(x, 0.0)).real();
  }
  return 0.0;
}

TestFunction make_triangle(double sigma) { return TestFunction(FourierProfile::triangle(sigma)); }

TestFunction make_raised_cosine(double sigma) {
  return TestFunction(FourierProfile::raised_cosine(sigma));
}

TestFunction make_piecewise_polynomial(double sigma, std::vector<double> coefficients) {
  return TestFunction(FourierProfile::piecewise_polynomial(sigma, std::move(coefficients)));
}

cplx eval_f(const TestFunction& fn, cplx z) { return fn(z); }

double integral_f(const TestFunction& fn) { return fn.fhat(0.0); }

double integral_fhat(const TestFunction& fn) { return fn.profile().total_mass(); }

double integral_fhat_window(const TestFunction& fn, double w) {
  return w <= 0.0 ? 0.0 : 2.0 * fn.profile().antiderivative(w);
}

double integral_fhat_between(const TestFunction& fn, double a, double b) {
  if (a < 0.0 || b < a) throw DomainError("integral_fhat_between needs 0 <= a <= b");
  return fn.profile().antiderivative(b) - fn.profile().antiderivative(a);
}

double integral_abs_u_pair(const TestFunction& fa, const TestFunction& fb) {
  const double m = std::min(fa.sigma(), fb.sigma());
  auto g = [&](double u) { return u * fa.fhat(u) * fb.fhat(u); };
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, m, 12, 1e-14, &err);
  if (err > 1e-10) throw NumericalError("integral_abs_u_pair did not converge", err);
  return 2.0 * v;
}

TestFunctionProduct::TestFunctionProduct(std::vector<TestFunction> factors, Unchecked)
    : factors_(std::move(factors)) {
  for (const auto& f : factors_) total_support_ += f.sigma();
}

TestFunctionProduct::TestFunctionProduct(std::vector<TestFunction> factors)
    : TestFunctionProduct(std::move(factors), Unchecked{}) {
  if (factors_.empty()) throw DomainError("a product needs at least one factor");
  if (total_support_ >= 3.0)
    throw DomainError("total Fourier support " + std::to_string(total_support_) +
                      " >= 3: no closed form applies");
}

TestFunctionProduct TestFunctionProduct::unrestricted(std::vector<TestFunction> factors) {
  if (factors.empty()) throw DomainError("a product needs at least one factor");
  return TestFunctionProduct(std::move(factors), Unchecked{});
}

std::optional<int> TestFunctionProduct::support_class() const noexcept {
  if (total_support_ <= 1.0) return 1;
  if (total_support_ <= 2.0) return 2;
  if (total_support_ < 3.0) return 3;
  return std::nullopt;
}

std::vector<double> TestFunctionProduct::sigmas() const {
  std::vector<double> s;
  s.reserve(factors_.size());
  for (const auto& f : factors_) s.push_back(f.sigma());
  return s;
}

TestFunction test_function_from_json(const nlohmann::json& j) {
  return TestFunction(FourierProfile::from_json(j));
}

nlohmann::json to_json(const TestFunction& fn) { return fn.profile().to_json(); }

}  // namespace uspn
