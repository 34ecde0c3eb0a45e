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

#include "uspn/detform.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "uspn/errors.hpp"
#include "uspn/numeric.hpp"

namespace uspn {
namespace {

constexpr double kPi = std::numbers::pi;

void check_N(int N, int max_N) {
  if (N < 1 || N > max_N)
    throw DomainError("determinantal quadrature needs 1 <= N <= " + std::to_string(max_N));
}

// Node set and per-node kernel ingredients for S_{2N+1}(y -+ x).
struct KernelGrid {
  std::vector<QuadratureNode> nodes;
  std::vector<double> sm, cm, sh, ch;  // sin/cos of M t/2 and t/2
  std::vector<double> diag;
  long M;

  KernelGrid(int N, int panels) : nodes(gauss_panel_nodes(0.0, kPi, panels)), M(2L * N + 1) {
    const std::size_t n = nodes.size();
    sm.resize(n);
    cm.resize(n);
    sh.resize(n);
    ch.resize(n);
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = nodes[i].x;
      sm[i] = std::sin(0.5 * M * t);
      cm[i] = std::cos(0.5 * M * t);
      sh[i] = std::sin(0.5 * t);
      ch[i] = std::cos(0.5 * t);
      diag[i] = s_kernel(M, 0.0) - s_kernel(M, 2.0 * t);
    }
  }

  // K(t_i, t_j) from angle-addition identities.
  double off_diagonal(std::size_t i, std::size_t j) const {
    const double ds = sh[j] * ch[i] - ch[j] * sh[i];  // sin((tj - ti)/2)
    const double ss = sh[j] * ch[i] + ch[j] * sh[i];  // sin((tj + ti)/2)
    const double nd = sm[j] * cm[i] - cm[j] * sm[i];
    const double ns = sm[j] * cm[i] + cm[j] * sm[i];
    const double a = std::abs(ds) < 1e-6 ? s_kernel(M, nodes[j].x - nodes[i].x) : nd / (2 * kPi * ds);
    const double b = std::abs(ss) < 1e-6 ? s_kernel(M, nodes[j].x + nodes[i].x) : ns / (2 * kPi * ss);
    return a - b;
  }
};

double distinct_pair_once(int N, const AngleWeight& w1, const AngleWeight& w2, int panels) {
  const KernelGrid g(N, panels);
  const std::size_t n = g.nodes.size();
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = g.nodes[i].w * w1(g.nodes[i].x);
    b[i] = g.nodes[i].w * w2(g.nodes[i].x);
  }
  std::vector<double> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double k = g.off_diagonal(i, j);
      acc += b[j] * (g.diag[i] * g.diag[j] - k * k);
    }
    rows[i] = a[i] * acc;
  }
  return pairwise_sum(rows);
}

double one_level_once(int N, const AngleWeight& w, int panels) {
  const auto nodes = gauss_panel_nodes(0.0, kPi, panels);
  const long M = 2L * N + 1;
  std::vector<double> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    terms[i] = nodes[i].w * w(nodes[i].x) * (s_kernel(M, 0.0) - s_kernel(M, 2.0 * nodes[i].x));
  return pairwise_sum(terms);
}

}  // namespace

std::string to_string(SignConvention s) {
  return s == SignConvention::paper_plus ? "paper_plus" : "standard_minus";
}

SignConvention sign_convention_from_string(const std::string& name) {
  if (name == "paper_plus") return SignConvention::paper_plus;
  if (name == "standard_minus") return SignConvention::standard_minus;
  throw DomainError("unknown sign convention '" + name + "'");
}

double s_kernel(long M, double x) {
  // Reduce x = 2 pi k + e with |e| <= pi; sin(M x/2)/sin(x/2) = (-1)^{(M-1)k} sin(M e/2)/sin(e/2).
  const double k = std::nearbyint(x / (2.0 * kPi));
  const double e = x - 2.0 * kPi * k;
  const long long kk = static_cast<long long>(k);
  const double sign = ((M - 1) * kk) % 2 == 0 ? 1.0 : -1.0;
  double ratio;
  if (std::abs(e) < 1e-7) {
    const double m2 = static_cast<double>(M) * M;
    ratio = M * (1.0 - (m2 - 1.0) * e * e / 24.0);
  } else {
    ratio = std::sin(0.5 * M * e) / std::sin(0.5 * e);
  }
  return sign * ratio / (2.0 * kPi);
}

double sine_kernel(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - (kPi * x) * (kPi * x) / 6.0;
  return std::sin(kPi * x) / (kPi * x);
}

double kernel(const KernelSpec& spec, double x, double y) {
  if (spec.variant == KernelVariant::finite_N) {
    if (spec.N < 1) throw DomainError("finite-N kernel needs N >= 1");
    const long M = 2L * spec.N + 1;
    return s_kernel(M, y - x) - s_kernel(M, y + x);
  }
  const double sgn = spec.sign == SignConvention::standard_minus ? -1.0 : 1.0;
  return sine_kernel(y - x) + sgn * sine_kernel(y + x);
}

double pair_correlation(const KernelSpec& spec, double x, double y) {
  const double kxy = kernel(spec, x, y);
  return kernel(spec, x, x) * kernel(spec, y, y) - kxy * kxy;
}

AngleWeight raw_weight(int N, const TestFunction& f) {
  return [N, f](double theta) { return f(N * theta / kPi); };
}

AngleWeight folded_weight(int N, const TestFunction& f, int K_max) {
  if (K_max >= 0) {
    return [N, f, K_max](double theta) {
      const double x = N * theta / kPi;
      double acc = 0.0;
      for (int k = -K_max; k <= K_max; ++k) acc += f(x + 2.0 * N * k) + f(2.0 * N * k - x);
      return acc;
    };
  }
  // Poisson summation: the images sum to a trigonometric polynomial.
  const int m_max = static_cast<int>(std::ceil(2.0 * N * f.sigma()));
  std::vector<double> coeff(m_max + 1);
  for (int m = 0; m <= m_max; ++m) coeff[m] = f.fhat(m / (2.0 * N)) / N;
  return [coeff](double theta) {
    double acc = coeff[0];
    for (std::size_t m = 1; m < coeff.size(); ++m) acc += 2.0 * coeff[m] * std::cos(m * theta);
    return acc;
  };
}

QuadratureValue one_level_integral(int N, const AngleWeight& w) {
  check_N(N, 4096);
  const int panels = 4 * N + 8;
  const double coarse = one_level_once(N, w, panels);
  const double fine = one_level_once(N, w, 2 * panels);
  const QuadratureValue out{fine, std::abs(fine - coarse)};
  if (out.error > 1e-9 * std::max(1.0, std::abs(fine)))
    throw NumericalError("one-level quadrature did not converge", out.error);
  return out;
}

QuadratureValue distinct_pair_integral(int N, const AngleWeight& w1, const AngleWeight& w2) {
  check_N(N, 128);
  const int panels = 2 * N + 4;
  const double coarse = distinct_pair_once(N, w1, w2, panels);
  const double fine = distinct_pair_once(N, w1, w2, 2 * panels);
  const QuadratureValue out{fine, std::abs(fine - coarse)};
  if (out.error > 1e-7 * std::max(1.0, std::abs(fine)))
    throw NumericalError("pair quadrature did not converge", out.error);
  return out;
}

DensityEstimate one_level_finite_N(int N, const TestFunction& f) {
  check_N(N, 128);
  const auto q = one_level_integral(N, raw_weight(N, f));
  return DensityEstimate{q.value, q.error, 1, N, Method::determinantal, 0};
}

DensityEstimate one_level_folded(int N, const TestFunction& f, int K_max) {
  check_N(N, 128);
  const auto q = one_level_integral(N, folded_weight(N, f, K_max));
  return DensityEstimate{q.value, q.error, 1, N, Method::determinantal, 0};
}

double distinct_pair_density_finite_N(int N, const TestFunction& f1, const TestFunction& f2) {
  check_N(N, 64);
  return distinct_pair_integral(N, raw_weight(N, f1), raw_weight(N, f2)).value;
}

double full_pair_from_distinct(int N, const TestFunction& f1, const TestFunction& f2) {
  check_N(N, 64);
  const auto w1 = raw_weight(N, f1), w2 = raw_weight(N, f2);
  const AngleWeight both = [&](double t) { return w1(t) * w2(t); };
  return distinct_pair_density_finite_N(N, f1, f2) + one_level_integral(N, both).value;
}

DensityEstimate two_level_folded(int N, const TestFunction& f1, const TestFunction& f2,
                                 int K_max) {
  check_N(N, 64);
  const auto w1 = folded_weight(N, f1, K_max), w2 = folded_weight(N, f2, K_max);
  const AngleWeight both = [&](double t) { return w1(t) * w2(t); };
  const auto d = distinct_pair_integral(N, w1, w2);
  const auto o = one_level_integral(N, both);
  return DensityEstimate{d.value + o.value, d.error + o.error, 2, N, Method::determinantal, 0};
}

double limit_one_level(const TestFunction& f, SignConvention sign) {
  const double s = sign == SignConvention::standard_minus ? -1.0 : 1.0;
  return 0.5 * f.fhat(0.0) + s * 0.25 * integral_fhat_window(f, 1.0);
}

double trace_integral(int N) {
  return one_level_integral(N, [](double) { return 1.0; }).value;
}

}  // namespace uspn
