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

#include "uspn/haar.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <thread>

#include "uspn/errors.hpp"
#include "uspn/numeric.hpp"

namespace uspn {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPairTol = 1e-8;

std::atomic<long long> g_resamples{0};

// Quaternion-conjugate partner: each 2-block (x, y) -> (-conj(y), conj(x)).
Eigen::VectorXcd jmap(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd w(v.size());
  for (Eigen::Index b = 0; b + 1 < v.size(); b += 2) {
    w[b] = -std::conj(v[b + 1]);
    w[b + 1] = std::conj(v[b]);
  }
  return w;
}

int worker_count(int requested, long long jobs) {
  long long w = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<int>(std::clamp<long long>(w, 1, std::max<long long>(1, jobs)));
}

}  // namespace

Eigen::MatrixXcd standard_skew_form(int N) {
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (int b = 0; b < N; ++b) {
    J(2 * b, 2 * b + 1) = 1.0;
    J(2 * b + 1, 2 * b) = -1.0;
  }
  return J;
}

Eigen::MatrixXcd draw_usp(int N, std::mt19937_64& rng) {
  if (N < 1 || N > 256) throw DomainError("sample_usp needs 1 <= N <= 256");
  const int n = 2 * N;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd U(n, n);
  Eigen::VectorXcd v(n);
  for (int k = 0; k < N; ++k) {
    const int done = 2 * k;
    double norm = 0.0;
    for (;;) {
      for (int i = 0; i < n; ++i) v[i] = cplx(normal(rng), normal(rng));
      const double norm0 = v.norm();
      // Classical Gram-Schmidt, repeated once for stability.
      for (int pass = 0; pass < 2 && done > 0; ++pass) {
        const Eigen::VectorXcd proj = U.leftCols(done).adjoint() * v;
        v.noalias() -= U.leftCols(done) * proj;
      }
      norm = v.norm();
      if (norm > 1e-10 * norm0) break;
      ++g_resamples;
    }
    v /= norm;
    U.col(done) = v;
    U.col(done + 1) = jmap(v);
  }
  return U;
}

SymplecticUnitarySample sample_usp(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SymplecticUnitarySample{N, draw_usp(N, rng), seed};
}

long long resample_events() { return g_resamples.load(); }

EigenangleSet eigenangles(const SymplecticUnitarySample& sample) {
  return eigenangles(sample.matrix);
}

EigenangleSet eigenangles(const Eigen::MatrixXcd& U) {
  const Eigen::Index n = U.rows();
  if (n % 2 != 0 || U.cols() != n) throw DomainError("eigenangles needs a 2N x 2N matrix");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(U, false);
  if (solver.info() != Eigen::Success) throw NumericalError("complex eigensolver failed");
  std::vector<cplx> upper, lower;
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx l = solver.eigenvalues()[i];
    (l.imag() >= 0.0 ? upper : lower).push_back(l);
  }
  auto by_angle = [](cplx a, cplx b) { return std::abs(std::arg(a)) < std::abs(std::arg(b)); };
  std::vector<std::pair<cplx, cplx>> pairs;
  if (upper.size() == lower.size()) {
    std::sort(upper.begin(), upper.end(), by_angle);
    std::sort(lower.begin(), lower.end(), by_angle);
    for (std::size_t i = 0; i < upper.size(); ++i) pairs.emplace_back(upper[i], lower[i]);
  } else {
    // Real eigenvalues (theta = 0 or pi) split unevenly by rounding.
    std::vector<cplx> all(upper);
    all.insert(all.end(), lower.begin(), lower.end());
    std::sort(all.begin(), all.end(), by_angle);
    for (std::size_t i = 0; i + 1 < all.size(); i += 2) pairs.emplace_back(all[i], all[i + 1]);
  }
  EigenangleSet out{static_cast<int>(n / 2), {}};
  for (const auto& [a, b] : pairs) {
    if (std::abs(a - std::conj(b)) > kPairTol)
      throw NumericalError("eigenvalues do not pair as e^{+-i theta}", std::abs(a - std::conj(b)));
    out.angles.push_back(0.5 * (std::abs(std::arg(a)) + std::abs(std::arg(b))));
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

EigenangleSet eigenangles_hermitian(const Eigen::MatrixXcd& U) {
  const Eigen::Index n = U.rows();
  if (n % 2 != 0 || U.cols() != n) throw DomainError("eigenangles needs a 2N x 2N matrix");
  const Eigen::MatrixXcd H = 0.5 * (U + U.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  const auto& ev = solver.eigenvalues();
  EigenangleSet out{static_cast<int>(n / 2), {}};
  out.angles.reserve(n / 2);
  for (Eigen::Index k = 0; k < n; k += 2) {
    if (std::abs(ev[k] - ev[k + 1]) > kPairTol)
      throw NumericalError("Hermitian part lost its double degeneracy", std::abs(ev[k] - ev[k + 1]));
    out.angles.push_back(std::acos(std::clamp(0.5 * (ev[k] + ev[k + 1]), -1.0, 1.0)));
  }
  std::sort(out.angles.begin(), out.angles.end());
  return out;
}

Eigen::MatrixXcd diagonal_usp(std::span<const double> thetas) {
  const Eigen::Index N = static_cast<Eigen::Index>(thetas.size());
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  for (Eigen::Index j = 0; j < N; ++j) {
    U(2 * j, 2 * j) = std::polar(1.0, thetas[j]);
    U(2 * j + 1, 2 * j + 1) = std::polar(1.0, -thetas[j]);
  }
  return U;
}

double extended_angle(const EigenangleSet& set, long long j) {
  if (j == 0) throw DomainError("extended_angle is undefined at j = 0");
  if (j < 0) return -extended_angle(set, -j);
  const long long N = set.N;
  const long long period = (j - 1) / (2 * N);
  const long long r = (j - 1) % (2 * N) + 1;
  const double base = r <= N ? set.angles[r - 1] : 2.0 * kPi - set.angles[2 * N - r];
  return base + 2.0 * kPi * static_cast<double>(period);
}

double one_level_sum(const EigenangleSet& set, const TestFunction& f, int K_max) {
  if (K_max < 0) throw DomainError("K_max must be nonnegative");
  const double scale = set.N / kPi;
  const double shift = 2.0 * set.N;
  double acc = 0.0;
  for (double theta : set.angles) {
    const double x = scale * theta;
    double s = f(x);
    for (int k = 1; k <= K_max; ++k) s += f(x + shift * k) + f(x - shift * k);
    acc += s;
  }
  return 2.0 * acc;
}

double image_tail_bound(int N, const TestFunction& f, int K_max) {
  if (K_max < 0) throw DomainError("K_max must be nonnegative");
  // sum_{k > K} 1/(2k-1)^2 = pi^2/8 - sum_{k <= K} 1/(2k-1)^2.
  double head = 0.0;
  for (int k = 1; k <= K_max; ++k) head += 1.0 / ((2.0 * k - 1.0) * (2.0 * k - 1.0));
  const double odd_tail = std::max(0.0, kPi * kPi / 8.0 - head);
  return f.profile().derivative_variation() / (kPi * kPi * N) * odd_tail;
}

double empirical_n_level(const EigenangleSet& set, const TestFunctionProduct& product,
                         int K_max) {
  double acc = 1.0;
  for (const auto& f : product.factors()) acc *= one_level_sum(set, f, K_max);
  return acc;
}

void for_each_eigenangle_set(int N, long long first, long long count, std::uint64_t seed,
                             const std::function<void(long long, const EigenangleSet&)>& visit,
                             bool hermitian_route) {
  for (long long s = first; s < first + count; ++s) {
    std::mt19937_64 rng(substream_seed(seed, static_cast<std::uint64_t>(s)));
    const Eigen::MatrixXcd U = draw_usp(N, rng);
    visit(s, hermitian_route ? eigenangles_hermitian(U) : eigenangles(U));
  }
}

std::vector<std::vector<double>> mc_sample_values(int N,
                                                  std::span<const TestFunctionProduct> products,
                                                  long long num_samples, std::uint64_t seed,
                                                  const MonteCarloOptions& options) {
  if (num_samples < 1) throw DomainError("Monte Carlo needs at least one sample");
  std::vector<std::vector<double>> values(products.size(), std::vector<double>(num_samples));
  const int workers = worker_count(options.workers, num_samples);
  auto run_range = [&](long long first, long long count) {
    for_each_eigenangle_set(
        N, first, count, seed,
        [&](long long s, const EigenangleSet& set) {
          for (std::size_t p = 0; p < products.size(); ++p)
            values[p][s] = empirical_n_level(set, products[p], options.K_max);
        },
        options.hermitian_route);
  };
  if (workers == 1) {
    run_range(0, num_samples);
    return values;
  }
  std::vector<std::jthread> pool;
  const long long chunk = (num_samples + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long first = w * chunk;
    const long long count = std::min(chunk, num_samples - first);
    if (count > 0) pool.emplace_back(run_range, first, count);
  }
  return values;
}

DensityEstimate mc_n_level(int N, const TestFunctionProduct& product, long long num_samples,
                           std::uint64_t seed, const MonteCarloOptions& options) {
  if (num_samples < 2) throw DomainError("Monte Carlo needs at least two samples");
  const auto values = mc_sample_values(N, std::span(&product, 1), num_samples, seed, options);
  const auto ms = mean_stderr(values[0]);
  return DensityEstimate{ms.mean, ms.std_error, static_cast<int>(product.size()), N,
                         Method::monte_carlo, num_samples};
}

void write_eigenangle_csv_header(std::ostream& os) { os << "sample_index,j,theta\n"; }

void write_eigenangle_csv(std::ostream& os, long long sample_index, const EigenangleSet& set) {
  const auto old = os.precision(17);
  for (std::size_t j = 0; j < set.angles.size(); ++j)
    os << sample_index << ',' << j + 1 << ',' << set.angles[j] << '\n';
  os.precision(old);
}

double weyl_density(std::span<const double> thetas) {
  const int N = static_cast<int>(thetas.size());
  if (N < 1 || N > 3) throw DomainError("weyl_density implemented for 1 <= N <= 3");
  double v = 1.0;
  for (int j = 0; j < N; ++j) {
    const double s = std::sin(thetas[j]);
    v *= s * s;
    for (int k = j + 1; k < N; ++k) {
      const double d = std::cos(thetas[j]) - std::cos(thetas[k]);
      v *= d * d;
    }
  }
  double factorial = 1.0;
  for (int k = 2; k <= N; ++k) factorial *= k;
  return std::pow(2.0, N * N) / (std::pow(kPi, N) * factorial) * v;
}

EigenangleSet sample_weyl_rejection(int N, std::mt19937_64& rng) {
  if (N < 1 || N > 3) throw DomainError("Weyl rejection sampler implemented for 1 <= N <= 3");
  std::uniform_real_distribution<double> angle(0.0, kPi), unit(0.0, 1.0);
  std::vector<double> t(N);
  for (;;) {
    double accept = 1.0;
    for (int j = 0; j < N; ++j) t[j] = angle(rng);
    for (int j = 0; j < N; ++j) {
      const double s = std::sin(t[j]);
      accept *= s * s;
      for (int k = j + 1; k < N; ++k) {
        const double d = 0.5 * (std::cos(t[j]) - std::cos(t[k]));
        accept *= d * d;
      }
    }
    if (unit(rng) < accept) break;
  }
  std::sort(t.begin(), t.end());
  return EigenangleSet{N, t};
}

}  // namespace uspn
