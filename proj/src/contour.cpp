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

#include "uspn/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uspn/closedform.hpp"
#include "uspn/errors.hpp"
#include "uspn/jstar.hpp"
#include "uspn/numeric.hpp"

namespace uspn {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

using Vec = std::vector<cplx>;

cplx e_factor(int N, cplx z) { return -std::exp(-2.0 * N * z) * z_func(-2.0 * z); }

// table[r] = g(x0 + i h r), r = 0..M-1
template <class G>
Vec table(const PeriodicGrid& grid, double x0, G&& g) {
  Vec t(grid.M);
  for (int r = 0; r < grid.M; ++r) t[r] = g(cplx{x0, grid.h() * r});
  return t;
}

template <class G>
Vec on_line(const PeriodicGrid& grid, double delta, G&& g) {
  Vec t(grid.M);
  for (int j = 0; j < grid.M; ++j) t[j] = g(cplx{delta, grid.y(j)});
  return t;
}

Vec times(Vec a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return a;
}

cplx dot(const Vec& a, const Vec& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

cplx total(const Vec& a) {
  cplx s = 0.0;
  for (cplx x : a) s += x;
  return s;
}

// out[k] = sum_l t[(l + k) mod M] F[l]  (arguments z_l + z_k)
Vec cyc_plus(const Vec& F, const Vec& t) {
  const int M = static_cast<int>(F.size());
  Vec out(M);
  for (int k = 0; k < M; ++k) {
    cplx s = 0.0;
    for (int l = 0; l < M - k; ++l) s += t[l + k] * F[l];
    for (int l = M - k; l < M; ++l) s += t[l + k - M] * F[l];
    out[k] = s;
  }
  return out;
}

// out[k] = sum_l t[(l - k) mod M] F[l]  (arguments z_l - z_k)
Vec cyc_minus(const Vec& F, const Vec& t) {
  const int M = static_cast<int>(F.size());
  Vec out(M);
  for (int k = 0; k < M; ++k) {
    cplx s = 0.0;
    for (int l = 0; l < k; ++l) s += t[l - k + M] * F[l];
    for (int l = k; l < M; ++l) s += t[l - k] * F[l];
    out[k] = s;
  }
  return out;
}

// sum_{j,k} u_j v_k s[(j + k) mod M] d[(k - j) mod M]
cplx sum_diff_double(const Vec& u, const Vec& v, const Vec& s, const Vec& d) {
  const int M = static_cast<int>(u.size());
  cplx acc = 0.0;
  for (int j = 0; j < M; ++j) {
    cplx row = 0.0;
    for (int k = 0; k < M; ++k) {
      const int p = (j + k) % M;
      const int m = (k - j + M) % M;
      row += v[k] * s[p] * d[m];
    }
    acc += u[j] * row;
  }
  return acc;
}

double sum_sigma(std::span<const TestFunction> fns, const IndexSet& labels) {
  double s = 0.0;
  for (int i : labels) s += fns[i].sigma();
  return s;
}

// Evaluates `eval(grid)` at M and at about 0.8 M nodes.
template <class Eval>
std::pair<cplx, double> with_check(int M, Eval&& eval) {
  const cplx fine = eval(PeriodicGrid{M});
  const int coarse_m = std::max(16, static_cast<int>(std::ceil(0.8 * M)));
  const cplx coarse = eval(PeriodicGrid{coarse_m});
  return {fine, std::abs(fine - coarse)};
}

void check_labels(std::span<const TestFunction> fns, const IndexSet& s, const char* who) {
  for (int i : s)
    if (i < 0 || static_cast<std::size_t>(i) >= fns.size())
      throw DomainError(std::string(who) + ": label out of range");
}

}  // namespace

void ContourSpec::validate() const {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0)) throw DomainError("ContourSpec: deltas must be positive");
    if (i > 0 && !(deltas[i] > deltas[i - 1]))
      throw DomainError("ContourSpec: deltas must be strictly increasing");
  }
  if (!(delta_scale > 0.0)) throw DomainError("ContourSpec: delta_scale must be positive");
  if (truncation_T != 0.0 && truncation_T < 10.0)
    throw DomainError("ContourSpec: truncation_T must be >= 10");
  if (nodes_per_line < 64) throw DomainError("ContourSpec: nodes_per_line must be >= 64");
  if (!(tolerance > 0.0)) throw DomainError("ContourSpec: tolerance must be positive");
}

std::vector<double> ContourSpec::resolve_deltas(int N, std::size_t count) const {
  if (N < 1) throw DomainError("ContourSpec: N must be >= 1");
  if (!deltas.empty()) {
    if (deltas.size() < count) throw DomainError("ContourSpec: fewer deltas than variables");
    return {deltas.begin(), deltas.begin() + static_cast<long>(count)};
  }
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = delta_scale * static_cast<double>(k + 1) / N;
  return out;
}

double ContourSpec::resolve_T(int N, double delta) const {
  if (truncation_T > 0.0) return truncation_T;
  return std::min(500.0, 50.0 / (N * delta));
}

double PeriodicGrid::h() const { return 2.0 * kPi / M; }
double PeriodicGrid::y(int j) const { return -kPi + h() * j; }

LineIntegral vertical_line_integral(const std::function<cplx(cplx)>& g, double delta, double T,
                                    const ContourSpec& spec, double frequency) {
  if (!(T > 0.0)) throw DomainError("vertical_line_integral: T must be positive");
  const double omega = 2.0 * kPi * frequency;
  const double shift = std::exp(omega * delta);
  // Along the line: G(y) e^{i omega y}.
  auto G = [&](double y) { return g(cplx{delta, y}) * shift; };
  auto phi = [&](double y) { return G(y) * std::exp(cplx{0.0, omega * y}); };

  const double width = std::min(0.5, std::max(std::abs(delta), 1e-3) / 2.0);
  const int panels = std::max(spec.nodes_per_line / 20, static_cast<int>(std::ceil(2.0 * T / width)));
  auto integrate = [&](int p) {
    cplx s = 0.0;
    for (const auto& nd : gauss_panel_nodes(-T, T, p)) s += nd.w * phi(nd.x);
    return s;
  };
  const cplx coarse = integrate(panels);
  const cplx fine = integrate(2 * panels);

  cplx tail = 0.0;
  double tail_err = 0.0;
  if (omega != 0.0) {
    const double eta = std::max(1.0, 0.02 * T);
    const cplx iw{0.0, omega};
    auto ends = [&](double y0, double sgn) {
      const cplx g0 = G(y0), gp = G(y0 + eta), gm = G(y0 - eta);
      const cplx d1 = (gp - gm) / (2.0 * eta);
      const cplx d2 = (gp - 2.0 * g0 + gm) / (eta * eta);
      const cplx e = std::exp(cplx{0.0, omega * y0});
      const cplx t3 = d2 / (iw * iw * iw);
      tail_err += std::abs(t3);
      return sgn * e * (-g0 / iw + d1 / (iw * iw) - t3);
    };
    tail = ends(T, 1.0) + ends(-T, -1.0);
    if (tail_err > 10.0 * spec.tolerance)
      throw TruncationError("vertical_line_integral: oscillatory tail not resolved", tail_err);
  } else {
    const auto last = gauss_panel_nodes(T - width, T, 1);
    cplx edge = 0.0;
    for (const auto& nd : last) edge += nd.w * (phi(nd.x) + phi(-nd.x));
    tail_err = std::abs(edge);
    if (tail_err > 10.0 * spec.tolerance)
      throw TruncationError("vertical_line_integral: integrand has not decayed at T", tail_err);
  }
  const double scale = 1.0 / (2.0 * kPi);
  return {scale * (fine + tail), scale * (std::abs(fine - coarse) + tail_err), 2 * panels};
}

std::vector<cplx> periodized_profile(int N, const TestFunction& f, double delta,
                                     const PeriodicGrid& grid) {
  const int mmax = static_cast<int>(std::floor(2.0 * N * f.sigma()));
  std::vector<double> c(mmax + 1);
  for (int m = 0; m <= mmax; ++m) c[m] = f.fhat(m / (2.0 * N));
  Vec out(grid.M);
  for (int j = 0; j < grid.M; ++j) {
    const cplx w = std::exp(cplx{-delta, -grid.y(j)});  // e^{-z}
    const cplx winv = 1.0 / w;
    cplx p = 1.0, q = 1.0, s = c[0];
    for (int m = 1; m <= mmax; ++m) {
      p *= w;
      q *= winv;
      s += c[m] * (p + q);
    }
    out[j] = s / (2.0 * N);
  }
  return out;
}

int periodic_nodes(double bandwidth, double gap, int minimum) {
  if (!(gap > 0.0)) throw DomainError("periodic_nodes: contour passes through a pole");
  const double m = bandwidth + 40.0 / gap + 16.0;
  const int n = std::max(minimum, static_cast<int>(std::ceil(m)));
  return (n + 15) / 16 * 16;
}

// ---------------------------------------------------------------------------
// n-level density

namespace {

struct TermEval {
  int N;
  int shells;  // include shells |D| < shells
  ContourRoute route;
};

// (1/2 pi i)^n 2^n int J*(z) prod f over the Q-lines, n = |fs| in {1, 2}.
cplx q_integral(const TermEval& t, std::span<const TestFunction> fs,
                std::span<const double> deltas, const PeriodicGrid& grid) {
  const int N = t.N;
  const double hp = grid.h() / kPi;
  if (t.route == ContourRoute::direct) {
    std::vector<Vec> F;
    for (std::size_t i = 0; i < fs.size(); ++i)
      F.push_back(periodized_profile(N, fs[i], deltas[i], grid));
    cplx s = 0.0;
    if (fs.size() == 1) {
      for (int j = 0; j < grid.M; ++j) {
        const cplx a[1] = {cplx{deltas[0], grid.y(j)}};
        s += j_star_trunc(N, a, t.shells) * F[0][j];
      }
      return hp * s;
    }
    for (int j = 0; j < grid.M; ++j)
      for (int k = 0; k < grid.M; ++k) {
        const cplx a[2] = {cplx{deltas[0], grid.y(j)}, cplx{deltas[1], grid.y(k)}};
        s += j_star_trunc(N, a, t.shells) * F[0][j] * F[1][k];
      }
    return hp * hp * s;
  }

  const double d0 = deltas[0];
  const Vec F0 = periodized_profile(N, fs[0], d0, grid);
  const Vec P0 = on_line(grid, d0, [](cplx z) { return z_log_deriv(2.0 * z); });
  const Vec E0 = on_line(grid, d0, [N](cplx z) { return e_factor(N, z); });
  if (fs.size() == 1) {
    cplx s = dot(P0, F0);
    if (t.shells >= 2) s += dot(E0, F0);
    return hp * s;
  }
  const double d1 = deltas[1];
  const Vec F1 = periodized_profile(N, fs[1], d1, grid);
  const Vec P1 = on_line(grid, d1, [](cplx z) { return z_log_deriv(2.0 * z); });
  const Vec E1 = on_line(grid, d1, [N](cplx z) { return e_factor(N, z); });
  const Vec lp_sum = table(grid, d0 + d1, [](cplx x) { return z_log_deriv_prime(x); });

  const cplx pf0 = dot(P0, F0), pf1 = dot(P1, F1);
  cplx s = pf0 * pf1 + dot(F0, cyc_plus(F1, lp_sum));
  if (t.shells >= 2) {
    const Vec l_sum = table(grid, d0 + d1, [](cplx x) { return z_log_deriv(x); });
    const Vec l_diff = table(grid, d1 - d0, [](cplx x) { return z_log_deriv(x); });   // b - a
    const Vec l_ndiff = table(grid, d0 - d1, [](cplx x) { return z_log_deriv(x); });  // a - b
    const Vec ef0 = times(E0, F0), ef1 = times(E1, F1);
    // D = {a}: E(a) [zl(2b) + zl(b - a) - zl(a + b)]
    s += total(ef0) * pf1 + dot(ef0, cyc_minus(F1, l_diff)) - dot(ef0, cyc_plus(F1, l_sum));
    // D = {b}: E(b) [zl(2a) + zl(a - b) - zl(a + b)]
    s += total(ef1) * pf0 + dot(ef1, cyc_minus(F0, l_ndiff)) - dot(ef1, cyc_plus(F0, l_sum));
    if (t.shells >= 3) {
      const Vec zz = table(grid, d0 + d1, [](cplx x) { return z_func(x) * z_func(-x); });
      const Vec inv = table(grid, d1 - d0, [](cplx x) { return 1.0 / (z_func(x) * z_func(-x)); });
      s += sum_diff_double(ef0, ef1, zz, inv);
    }
  }
  return hp * hp * s;
}

// Distances in y of the nearest poles: zl(2z) and z(-2z) at y = i delta,
// two-variable kernels at the sum and difference of the offsets.
double q_gap(std::span<const double> d) {
  double g = d[0];
  if (d.size() == 2) g = std::min({g, d[1] - d[0], d[0] + d[1]});
  return g;
}

}  // namespace

ContourResult n_level_contour(int N, const TestFunctionProduct& product, const ContourSpec& spec,
                              const ContourOptions& opt) {
  spec.validate();
  if (N < 1) throw DomainError("n_level_contour: N must be >= 1");
  const int n = static_cast<int>(product.size());
  if (n > 2) throw CapacityError("n_level_contour: n <= 2 (use the closed forms beyond)");

  int q = opt.q;
  if (opt.untruncated) {
    q = n + 1;
  } else if (q == 0) {
    const auto sc = product.support_class();
    if (!sc) throw DomainError("n_level_contour: no support class; pass q or untruncated");
    q = *sc;
  }
  if (q < 1) throw DomainError("n_level_contour: q must be >= 1");
  if (opt.route == ContourRoute::truncated_lines && n > 1)
    throw CapacityError("n_level_contour: truncated lines only for n = 1");

  ContourResult res;
  res.q = q;
  res.deltas = spec.resolve_deltas(N, static_cast<std::size_t>(n));
  res.estimate.n = n;
  res.estimate.N = N;
  res.estimate.method = Method::contour;
  if (n == 0) {
    res.estimate.value = 1.0;
    return res;
  }

  // M-variables: the imaginary axis, (2N/2 pi i) int f = int f.
  std::vector<double> m_value(n), m_err(n);
  for (int k = 0; k < n; ++k) {
    const auto& f = product[k];
    const int M = periodic_nodes(2.0 * N * f.sigma(), 1.0, spec.nodes_per_line);
    auto [v, e] = with_check(M, [&](const PeriodicGrid& g) {
      return cplx(N / kPi * g.h()) * total(periodized_profile(N, f, 0.0, g));
    });
    m_value[k] = v.real();
    m_err[k] = e;
  }

  const IndexSet all = range_set(0, n - 1);
  double value = 0.0, err2 = 0.0;
  for_each_subset(all, [&](const IndexSet& Q) {
    ContourTerm term;
    term.Q = Q;
    term.M = set_difference(all, Q);
    double mprod = 1.0, mrel = 0.0;
    for (int k : term.M) {
      mprod *= m_value[k];
      mrel += m_err[k] / std::max(std::abs(m_value[k]), 1e-300);
    }
    double qv = 1.0, qe = 0.0;
    if (!Q.empty()) {
      std::vector<TestFunction> fs;
      std::vector<double> ds;
      double sig = 0.0;
      // Lines keep their global order, so the spread is the same in every term.
      for (int k : Q) {
        fs.push_back(product[k]);
        ds.push_back(res.deltas[k]);
        sig += product[k].sigma();
      }
      const int shells = std::min(q, static_cast<int>(Q.size()) + 1);
      if (opt.route == ContourRoute::truncated_lines) {
        const double d = ds[0];
        const TestFunction f = fs[0];
        auto g = [&](cplx z) {
          const cplx a[1] = {z};
          return 2.0 * j_star_trunc(N, a, shells) * eval_f(f, N / kPi * kI * z);
        };
        const auto li = vertical_line_integral(g, d, spec.resolve_T(N, d), spec);
        qv = li.value.real();
        qe = li.error;
      } else {
        const double bw = 2.0 * N * (std::min<double>(shells - 1, Q.size()) + sig);
        const int M = periodic_nodes(bw, q_gap(ds), spec.nodes_per_line);
        res.nodes = std::max(res.nodes, M);
        const TermEval te{N, shells, opt.route};
        auto [v, e] = with_check(M, [&](const PeriodicGrid& g) { return q_integral(te, fs, ds, g); });
        qv = v.real();
        qe = e;
      }
    }
    term.value = mprod * qv;
    term.error = std::abs(mprod) * qe + std::abs(term.value) * mrel;
    value += term.value;
    err2 += term.error * term.error;
    res.terms.push_back(term);
  });
  res.estimate.value = value;
  res.estimate.std_error = std::sqrt(err2);
  return res;
}

std::vector<DeltaSweepPoint> delta_sweep(int N, const TestFunctionProduct& product,
                                         std::span<const double> scales,
                                         const ContourOptions& opt) {
  std::vector<DeltaSweepPoint> out;
  for (double c : scales) {
    ContourSpec spec;
    spec.delta_scale = c;
    const auto r = n_level_contour(N, product, spec, opt);
    out.push_back({c, r.estimate.value, r.estimate.std_error});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lemma verifiers

namespace {

struct LemmaContext {
  int N;
  std::span<const TestFunction> fns;
  std::vector<double> deltas;
};

// Arms for one "d" variable on the grid: prod_{i in A} (1/pi) int -zl(z_i + z_d) f_i
// times prod_{j in B \ d} (1/pi) int zl(z_j - z_d) f_j, as a function of z_d.
Vec arms(const LemmaContext& c, const PeriodicGrid& grid, int d, const IndexSet& A,
         const IndexSet& B) {
  const double hp = grid.h() / kPi;
  Vec out(grid.M, cplx(1.0));
  const double dd = c.deltas[d];
  for (int i : A) {
    const Vec F = periodized_profile(c.N, c.fns[i], c.deltas[i], grid);
    const Vec t = table(grid, c.deltas[i] + dd, [](cplx x) { return -z_log_deriv(x); });
    const Vec g = cyc_plus(F, t);
    for (int k = 0; k < grid.M; ++k) out[k] *= hp * g[k];
  }
  for (int j : B) {
    if (j == d) continue;
    const Vec F = periodized_profile(c.N, c.fns[j], c.deltas[j], grid);
    const Vec t = table(grid, c.deltas[j] - dd, [](cplx x) { return z_log_deriv(x); });
    const Vec g = cyc_minus(F, t);
    for (int k = 0; k < grid.M; ++k) out[k] *= hp * g[k];
  }
  return out;
}

Vec e_profile(const LemmaContext& c, const PeriodicGrid& grid, int d) {
  const int N = c.N;
  const Vec E = on_line(grid, c.deltas[d], [N](cplx z) { return e_factor(N, z); });
  return times(E, periodized_profile(N, c.fns[d], c.deltas[d], grid));
}

double pair_gap(const std::vector<double>& dl, const IndexSet& plus_with, const IndexSet& minus_with,
                int d) {
  double g = dl[d];
  for (int i : plus_with) g = std::min(g, dl[i] + dl[d]);
  for (int j : minus_with)
    if (j != d) g = std::min(g, std::abs(dl[j] - dl[d]));
  return g;
}

void check_disjoint_cover(std::span<const TestFunction> fns, const std::vector<IndexSet>& sets,
                          const char* who) {
  IndexSet u;
  std::size_t count = 0;
  for (const auto& s : sets) {
    check_labels(fns, s, who);
    u = set_union(u, s);
    count += s.size();
  }
  if (u.size() != count) throw DomainError(std::string(who) + ": sets must be disjoint");
}

}  // namespace

LemmaPoint lemma_lhs(int k, int N, std::span<const TestFunction> fns, const LemmaSets& sets,
                     const ContourSpec& spec) {
  spec.validate();
  if (N < 1) throw DomainError("lemma_lhs: N must be >= 1");
  LemmaContext c{N, fns, spec.resolve_deltas(N, fns.size())};
  const auto& dl = c.deltas;
  LemmaPoint out;
  out.N = N;
  std::pair<cplx, double> r;

  switch (k) {
    case 1: {
      if (fns.size() < 2) throw DomainError("lemma 1: needs two test functions");
      const double bw = 2.0 * N * (fns[0].sigma() + fns[1].sigma());
      out.nodes = periodic_nodes(bw, dl[0] + dl[1], spec.nodes_per_line);
      r = with_check(out.nodes, [&](const PeriodicGrid& g) {
        const Vec F0 = periodized_profile(N, fns[0], dl[0], g);
        const Vec F1 = periodized_profile(N, fns[1], dl[1], g);
        const Vec t = table(g, dl[0] + dl[1], [](cplx x) { return z_log_deriv_prime(x); });
        const double hp = g.h() / kPi;
        return hp * hp * dot(F0, cyc_plus(F1, t));
      });
      break;
    }
    case 2: {
      if (fns.empty()) throw DomainError("lemma 2: needs a test function");
      out.nodes = periodic_nodes(2.0 * N * fns[0].sigma(), dl[0], spec.nodes_per_line);
      r = with_check(out.nodes, [&](const PeriodicGrid& g) {
        const Vec F = periodized_profile(N, fns[0], dl[0], g);
        const Vec P = on_line(g, dl[0], [](cplx z) { return z_log_deriv(2.0 * z); });
        return g.h() / kPi * dot(P, F);
      });
      break;
    }
    case 3: {
      if (fns.empty()) throw DomainError("lemma 3: needs a test function");
      out.nodes = periodic_nodes(2.0 * N * fns[0].sigma(), 1.0, spec.nodes_per_line);
      r = with_check(out.nodes, [&](const PeriodicGrid& g) {
        return cplx(N / kPi * g.h()) * total(periodized_profile(N, fns[0], -dl[0], g));
      });
      break;
    }
    case 4: {
      const auto& A = sets.A;
      const auto& B = sets.B;
      if (B.empty()) throw DomainError("lemma 4: |B| >= 1");
      check_disjoint_cover(fns, {A, B}, "lemma 4");
      const IndexSet all = set_union(A, B);
      double gap = 1e300;
      for (int d : B) gap = std::min(gap, pair_gap(dl, A, B, d));
      out.nodes = periodic_nodes(2.0 * N * (1.0 + sum_sigma(fns, all)), gap, spec.nodes_per_line);
      r = with_check(out.nodes, [&](const PeriodicGrid& g) {
        cplx s = 0.0;
        for (int d : B) s += dot(e_profile(c, g, d), arms(c, g, d, A, B));
        return g.h() / kPi * s;
      });
      break;
    }
    case 5: {
      const auto& [A1, B1, A2, B2] = std::tie(sets.A1, sets.B1, sets.A2, sets.B2);
      if (B1.empty() || B2.empty()) throw DomainError("lemma 5: |B1|, |B2| >= 1");
      check_disjoint_cover(fns, {A1, B1, A2, B2}, "lemma 5");
      const IndexSet all = set_union(set_union(A1, B1), set_union(A2, B2));
      double gap = 1e300;
      for (int d : B1) gap = std::min(gap, pair_gap(dl, A1, B1, d));
      for (int g2 : B2) gap = std::min(gap, pair_gap(dl, A2, B2, g2));
      for (int d : B1)
        for (int g2 : B2) gap = std::min(gap, dl[d] + dl[g2]);
      out.nodes = periodic_nodes(2.0 * N * (2.0 + sum_sigma(fns, all)), gap, spec.nodes_per_line);
      r = with_check(out.nodes, [&](const PeriodicGrid& g) {
        cplx s = 0.0;
        for (int d : B1) {
          const Vec u = times(e_profile(c, g, d), arms(c, g, d, A1, B1));
          for (int g2 : B2) {
            const Vec v = times(e_profile(c, g, g2), arms(c, g, g2, A2, B2));
            const Vec zz = table(g, dl[d] + dl[g2], [](cplx x) { return z_func(x) * z_func(-x); });
            const Vec inv = table(g, dl[g2] - dl[d],
                                  [](cplx x) { return 1.0 / (z_func(x) * z_func(-x)); });
            s += sum_diff_double(u, v, zz, inv);
          }
        }
        const double hp = g.h() / kPi;
        return hp * hp * s;
      });
      break;
    }
    default:
      throw DomainError("lemma_lhs: lemma index must be 1..5");
  }
  out.lhs = r.first.real();
  out.error = r.second + std::abs(r.first.imag());
  return out;
}

double lemma_rhs(int k, std::span<const TestFunction> fns, const LemmaSets& sets) {
  switch (k) {
    case 1:
      if (fns.size() < 2) throw DomainError("lemma 1: needs two test functions");
      return lemma1_rhs(fns[0], fns[1]);
    case 2:
      if (fns.empty()) throw DomainError("lemma 2: needs a test function");
      return lemma2_rhs(fns[0]);
    case 3:
      if (fns.empty()) throw DomainError("lemma 3: needs a test function");
      return lemma3_rhs(fns[0]);
    case 4:
      return lemma4_rhs(fns, sets.A, sets.B);
    case 5:
      return lemma5_rhs(fns, sets.A1, sets.B1, sets.A2, sets.B2);
    default:
      throw DomainError("lemma_rhs: lemma index must be 1..5");
  }
}

nlohmann::json LemmaReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : per_N)
    pts.push_back({{"N", p.N}, {"lhs", p.lhs}, {"error", p.error}, {"nodes", p.nodes}});
  return {{"lemma", lemma},       {"params", params},
          {"per_N", pts},         {"extrapolated", extrapolated},
          {"rhs", rhs},           {"rel_dev", rel_dev},
          {"rel_dev_raw", rel_dev_raw}, {"monotone", monotone},
          {"weak", weak}};
}

LemmaReport verify_lemma(int k, std::span<const TestFunction> fns, const LemmaSets& sets,
                         std::vector<int> N_schedule, const ContourSpec& spec) {
  if (N_schedule.empty()) throw DomainError("verify_lemma: empty N schedule");
  std::sort(N_schedule.begin(), N_schedule.end());
  LemmaReport rep;
  rep.lemma = k;
  nlohmann::json f = nlohmann::json::array();
  for (const auto& fn : fns) f.push_back(uspn::to_json(fn));
  rep.params = {{"functions", f}, {"delta_scale", spec.delta_scale}};
  if (k == 4) rep.params["sets"] = {{"A", sets.A}, {"B", sets.B}};
  if (k == 5)
    rep.params["sets"] = {{"A1", sets.A1}, {"B1", sets.B1}, {"A2", sets.A2}, {"B2", sets.B2}};

  std::vector<double> h, y;
  for (int N : N_schedule) {
    rep.per_N.push_back(lemma_lhs(k, N, fns, sets, spec));
    h.push_back(1.0 / N);
    y.push_back(rep.per_N.back().lhs);
  }
  rep.extrapolated = richardson_extrapolate(h, y);
  rep.rhs = lemma_rhs(k, fns, sets);
  rep.weak = std::abs(rep.rhs) < 1e-12;
  const double denom = rep.weak ? 1.0 : std::abs(rep.rhs);
  rep.rel_dev = std::abs(rep.extrapolated - rep.rhs) / denom;
  rep.rel_dev_raw = std::abs(y.back() - rep.rhs) / denom;
  for (std::size_t i = 2; i < y.size(); ++i) {
    const double d1 = y[i - 1] - y[i - 2], d2 = y[i] - y[i - 1];
    const double floor = 1e-12 * std::max(1.0, std::abs(y[i]));
    if (std::abs(d2) > floor && (d1 * d2 < 0.0 || std::abs(d2) > std::abs(d1))) rep.monotone = false;
  }
  return rep;
}

}  // namespace uspn
