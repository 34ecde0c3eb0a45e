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

#include "uspn/region.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "uspn/errors.hpp"
#include "uspn/numeric.hpp"

namespace uspn {
namespace {

using Rule = boost::math::quadrature::gauss<double, 20>;

constexpr int kMaxDims = 6;
constexpr double kVertexTol = 1e-11;

template <class F>
double gl20(F&& f, double a, double b) {
  if (!(b > a)) return 0.0;
  return Rule::integrate(f, a, b);
}

void sort_unique(std::vector<double>& v, double tol = 1e-13) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  v.swap(out);
}

bool subset_of(const IndexSet& a, const IndexSet& b) {
  return std::all_of(a.begin(), a.end(),
                     [&](int x) { return std::binary_search(b.begin(), b.end(), x); });
}

// Position of each label in dims.
std::map<int, int> positions(const IndexSet& dims) {
  std::map<int, int> pos;
  for (std::size_t k = 0; k < dims.size(); ++k) pos[dims[k]] = static_cast<int>(k);
  return pos;
}

// Linear form a . u + c over positions.
struct Affine {
  std::vector<double> a;
  double c = 0.0;

  double operator()(std::span<const double> x) const {
    double s = c;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * x[j];
    return s;
  }
};

// Effective bounds: fhat vanishes beyond sigma.
std::vector<double> effective_bounds(const ConstrainedRegion& r,
                                     std::span<const FourierProfile> profiles) {
  std::vector<double> b(r.dims.size());
  for (std::size_t k = 0; k < b.size(); ++k)
    b[k] = std::min(r.upper_bounds[k], profiles[k].sigma());
  return b;
}

// T = sum_rhs u - sum_lhs u as a coefficient vector over positions.
std::vector<int> inequality_signs(const LinearInequality& q, const std::map<int, int>& pos,
                                  std::size_t n) {
  std::vector<int> s(n, 0);
  for (int i : q.lhs) s[pos.at(i)] = -1;
  for (int j : q.rhs) s[pos.at(j)] = +1;
  return s;
}

// ---------------------------------------------------------------- factorized

std::optional<RegionResult> try_factorized(const ConstrainedRegion& r,
                                           std::span<const FourierProfile> profiles,
                                           const AffineWeight& w) {
  const std::size_t n = r.dims.size();
  const auto pos = positions(r.dims);
  const auto bounds = effective_bounds(r, profiles);
  if (r.inequalities.size() > 2) return std::nullopt;

  std::vector<int> group(n, -1);
  std::vector<std::vector<int>> sign;
  for (std::size_t g = 0; g < r.inequalities.size(); ++g) {
    sign.push_back(inequality_signs(r.inequalities[g], pos, n));
    for (std::size_t k = 0; k < n; ++k) {
      if (sign[g][k] == 0) continue;
      if (group[k] >= 0) return std::nullopt;
      group[k] = static_cast<int>(g);
    }
  }

  auto make_sum = [&](std::size_t g) {
    std::vector<FourierProfile> p;
    std::vector<int> s;
    std::vector<double> b;
    for (std::size_t k = 0; k < n; ++k) {
      if (group[k] != static_cast<int>(g)) continue;
      p.push_back(profiles[k]);
      s.push_back(sign[g][k]);
      b.push_back(bounds[k]);
    }
    return SignedSum(std::move(p), std::move(s), std::move(b));
  };

  std::vector<double> wvec(n, 0.0);
  for (auto [label, c] : w.terms) {
    const auto it = pos.find(label);
    if (it == pos.end()) throw DomainError("constrained_integral: weight label outside dims");
    wvec[it->second] += c;
  }

  double free_mass = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (group[k] >= 0) continue;
    if (wvec[k] != 0.0) return std::nullopt;
    free_mass *= profiles[k].antiderivative(bounds[k]);
  }

  if (!r.hyperplane) {
    for (double c : wvec)
      if (c != 0.0) return std::nullopt;
    double v = w.constant * free_mass;
    for (std::size_t g = 0; g < sign.size(); ++g) v *= make_sum(g).tail(1.0);
    return RegionResult{v, 0.0, RegionMethod::factorized};
  }

  if (sign.size() != 2) return std::nullopt;
  std::vector<int> h(n, 0);
  for (int i : r.hyperplane->plus) h[pos.at(i)] = +1;
  for (int j : r.hyperplane->minus) h[pos.at(j)] = -1;
  // h must be +-(T1 - T2)
  int eps = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const int d = sign[0][k] - sign[1][k];
    if (d == 0 && h[k] == 0) continue;
    if (d == 0 || h[k] == 0) return std::nullopt;
    const int e = h[k] * d;  // +-1
    if (eps == 0) eps = e;
    if (e != eps) return std::nullopt;
  }
  // weight must be alpha T1 + beta T2 on the groups
  std::array<std::optional<double>, 2> coef;
  for (std::size_t k = 0; k < n; ++k) {
    if (group[k] < 0) continue;
    const double c = wvec[k] / sign[group[k]][k];
    auto& slot = coef[group[k]];
    if (!slot) slot = c;
    if (std::abs(*slot - c) > 1e-15 * std::max(1.0, std::abs(c))) return std::nullopt;
  }
  const double slope = coef[0].value_or(0.0) + coef[1].value_or(0.0);
  const double v = free_mass * density_product_integral(make_sum(0), make_sum(1), 1.0, slope,
                                                        w.constant);
  return RegionResult{v, 0.0, RegionMethod::factorized};
}

// ---------------------------------------------------------------- reduced problem

// Region after eliminating the hyperplane variable: free variables x, linear
// constraints a . x + c <= 0, an optional dependent factor fhat_e(affine) and
// the weight as an affine form.
struct Reduced {
  int m = 0;
  std::vector<double> ub;
  std::vector<const FourierProfile*> prof;
  std::vector<Affine> cons;
  const FourierProfile* dep_profile = nullptr;
  Affine dep;
  Affine weight;

  double point_factor(std::span<const double> x) const {
    double v = weight(x);
    if (dep_profile) v *= (*dep_profile)(dep(x));
    return v;
  }
  bool feasible(std::span<const double> x, double tol) const {
    for (const auto& c : cons)
      if (c(x) > tol) return false;
    for (int j = 0; j < m; ++j)
      if (x[j] < -tol || x[j] > ub[j] + tol) return false;
    return true;
  }
};

Reduced reduce(const ConstrainedRegion& r, std::span<const FourierProfile> profiles,
               const AffineWeight& w) {
  const std::size_t n = r.dims.size();
  const auto pos = positions(r.dims);
  const auto bounds = effective_bounds(r, profiles);

  // forms over all positions, then substitute the eliminated one
  int elim = -1;
  std::vector<double> ue;  // u_e as a form over positions (coefficient of e is 0)
  if (r.hyperplane) {
    IndexSet plus = r.hyperplane->plus, minus = r.hyperplane->minus;
    if (plus.empty()) std::swap(plus, minus);
    elim = pos.at(plus.front());
    ue.assign(n, 0.0);
    for (int j : minus) ue[pos.at(j)] += 1.0;
    for (int i : plus)
      if (pos.at(i) != elim) ue[pos.at(i)] -= 1.0;
  }

  std::vector<int> free_pos;
  for (int k = 0; k < static_cast<int>(n); ++k)
    if (k != elim) free_pos.push_back(k);

  auto substitute = [&](std::vector<double> g, double c) {
    Affine out;
    if (elim >= 0) {
      const double ge = g[elim];
      for (std::size_t k = 0; k < n; ++k) g[k] += ge * ue[k];
      g[elim] = 0.0;
    }
    for (int k : free_pos) out.a.push_back(g[k]);
    out.c = c;
    return out;
  };

  Reduced red;
  red.m = static_cast<int>(free_pos.size());
  for (int k : free_pos) {
    red.ub.push_back(bounds[k]);
    red.prof.push_back(&profiles[k]);
  }
  for (const auto& q : r.inequalities) {
    std::vector<double> g(n, 0.0);
    for (int i : q.lhs) g[pos.at(i)] += 1.0;
    for (int j : q.rhs) g[pos.at(j)] -= 1.0;
    red.cons.push_back(substitute(g, 1.0));
  }
  if (elim >= 0) {
    std::vector<double> g(n, 0.0);
    g[elim] = 1.0;
    Affine e = substitute(g, 0.0);
    red.dep = e;
    red.dep_profile = &profiles[elim];
    Affine lo = e;  // -u_e <= 0
    for (double& a : lo.a) a = -a;
    lo.c = -lo.c;
    red.cons.push_back(lo);
    Affine hi = e;  // u_e - b_e <= 0
    hi.c -= bounds[elim];
    red.cons.push_back(hi);
  }
  std::vector<double> g(n, 0.0);
  for (auto [label, c] : w.terms) {
    const auto it = pos.find(label);
    if (it == pos.end()) throw DomainError("constrained_integral: weight label outside dims");
    g[it->second] += c;
  }
  red.weight = substitute(g, w.constant);
  return red;
}

// ---------------------------------------------------------------- nested

class Nested {
 public:
  explicit Nested(const Reduced& r) : r_(r), x_(r.m, 0.0) {}

  double run() {
    if (r_.m == 0) return r_.feasible(x_, kVertexTol) ? r_.point_factor(x_) : 0.0;
    return level(0);
  }

 private:
  // x_k-coordinates of the vertices of the polytope in (x_k, ..., x_{m-1})
  // with x_0 .. x_{k-1} fixed.
  std::vector<double> vertex_coordinates(int k) {
    const int d = r_.m - k;
    struct Plane {
      Eigen::VectorXd a;
      double rhs;
    };
    std::vector<Plane> planes;
    for (int j = k; j < r_.m; ++j) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e[j - k] = 1.0;
      planes.push_back({e, 0.0});
      planes.push_back({e, r_.ub[j]});
    }
    std::vector<double> shift(r_.cons.size());
    for (std::size_t c = 0; c < r_.cons.size(); ++c) {
      const auto& con = r_.cons[c];
      double s = con.c;
      for (int j = 0; j < k; ++j) s += con.a[j] * x_[j];
      shift[c] = s;
      Eigen::VectorXd a(d);
      bool nonzero = false;
      for (int j = k; j < r_.m; ++j) {
        a[j - k] = con.a[j];
        nonzero = nonzero || con.a[j] != 0.0;
      }
      if (!nonzero) {
        if (s > kVertexTol) return {};
        continue;
      }
      planes.push_back({a, -s});
    }

    std::vector<double> out;
    std::vector<int> pick(d);
    const int P = static_cast<int>(planes.size());
    Eigen::MatrixXd A(d, d);
    Eigen::VectorXd b(d);
    std::vector<double> y(d);
    // enumerate d-subsets of planes
    for (int i = 0; i < d; ++i) pick[i] = i;
    while (true) {
      for (int i = 0; i < d; ++i) {
        A.row(i) = planes[pick[i]].a.transpose();
        b[i] = planes[pick[i]].rhs;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      if (lu.isInvertible()) {
        const Eigen::VectorXd sol = lu.solve(b);
        bool ok = true;
        for (int j = 0; j < d && ok; ++j)
          ok = sol[j] >= -kVertexTol && sol[j] <= r_.ub[k + j] + kVertexTol;
        for (std::size_t c = 0; c < r_.cons.size() && ok; ++c) {
          double s = shift[c];
          for (int j = 0; j < d; ++j) s += r_.cons[c].a[k + j] * sol[j];
          ok = s <= kVertexTol * (1.0 + std::abs(shift[c]));
        }
        if (ok) out.push_back(std::clamp(sol[0], 0.0, r_.ub[k]));
      }
      int i = d - 1;
      while (i >= 0 && pick[i] == P - d + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < d; ++j) pick[j] = pick[j - 1] + 1;
    }
    sort_unique(out);
    return out;
  }

  double level(int k) {
    if (k == r_.m - 1) return last(k);
    const auto br = vertex_coordinates(k);
    double acc = 0.0;
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      acc += gl20(
          [&](double t) {
            x_[k] = t;
            return (*r_.prof[k])(t) * level(k + 1);
          },
          br[p], br[p + 1]);
    }
    return acc;
  }

  double last(int k) {
    double lo = 0.0, hi = r_.ub[k];
    for (const auto& con : r_.cons) {
      double s = con.c;
      for (int j = 0; j < k; ++j) s += con.a[j] * x_[j];
      const double a = con.a[k];
      if (a > 0.0) {
        hi = std::min(hi, -s / a);
      } else if (a < 0.0) {
        lo = std::max(lo, -s / a);
      } else if (s > kVertexTol) {
        return 0.0;
      }
    }
    return gl20(
        [&](double t) {
          x_[k] = t;
          return (*r_.prof[k])(t) * r_.point_factor(x_);
        },
        lo, hi);
  }

  const Reduced& r_;
  std::vector<double> x_;
};

// ---------------------------------------------------------------- quasi-Monte Carlo

RegionResult qmc(const Reduced& r, const RegionOptions& opt) {
  if (r.m == 0) return {Nested(r).run(), 0.0, RegionMethod::quasi_monte_carlo};
  double volume = 1.0;
  for (double b : r.ub) volume *= b;
  std::mt19937_64 rng(opt.qmc_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> replica(opt.qmc_replicas);
  std::vector<double> x(r.m), shift(r.m);
  constexpr double kScale = 0x1p-64;
  for (int rep = 0; rep < opt.qmc_replicas; ++rep) {
    for (double& s : shift) s = unif(rng);
    boost::random::sobol gen(r.m);
    std::vector<double> vals(opt.qmc_points);
    for (int i = 0; i < opt.qmc_points; ++i) {
      for (int j = 0; j < r.m; ++j) {
        double u = static_cast<double>(gen()) * kScale + shift[j];
        if (u >= 1.0) u -= 1.0;
        x[j] = u * r.ub[j];
      }
      double v = 0.0;
      if (r.feasible(x, 0.0)) {
        v = r.point_factor(x);
        for (int j = 0; j < r.m; ++j) v *= (*r.prof[j])(x[j]);
      }
      vals[i] = v;
    }
    replica[rep] = volume * pairwise_sum(vals) / opt.qmc_points;
  }
  const auto [mean, se] = mean_stderr(replica);
  return {mean, se, RegionMethod::quasi_monte_carlo};
}

}  // namespace

// ---------------------------------------------------------------- public

std::string to_string(RegionMethod m) {
  switch (m) {
    case RegionMethod::automatic: return "automatic";
    case RegionMethod::factorized: return "factorized";
    case RegionMethod::nested: return "nested";
    case RegionMethod::quasi_monte_carlo: return "quasi-monte-carlo";
  }
  return "?";
}

void ConstrainedRegion::validate() const {
  if (!std::is_sorted(dims.begin(), dims.end()) ||
      std::adjacent_find(dims.begin(), dims.end()) != dims.end())
    throw DomainError("region: dims must be sorted and distinct");
  if (upper_bounds.size() != dims.size()) throw DomainError("region: one upper bound per dim");
  for (double b : upper_bounds)
    if (!(b > 0.0)) throw DomainError("region: upper bounds must be positive");
  for (const auto& q : inequalities) {
    if (!subset_of(q.lhs, dims) || !subset_of(q.rhs, dims))
      throw DomainError("region: inequality index outside dims");
    if (!disjoint(q.lhs, q.rhs)) throw DomainError("region: inequality sides overlap");
  }
  if (hyperplane) {
    const auto& h = *hyperplane;
    if (!subset_of(h.plus, dims) || !subset_of(h.minus, dims))
      throw DomainError("region: hyperplane index outside dims");
    if (!disjoint(h.plus, h.minus)) throw DomainError("region: hyperplane sides overlap");
    if (h.plus.empty() && h.minus.empty()) throw DomainError("region: empty hyperplane");
  }
}

bool ConstrainedRegion::provably_empty() const {
  const auto pos = positions(dims);
  for (const auto& q : inequalities) {
    double reach = 0.0;
    for (int j : q.rhs) reach += upper_bounds[pos.at(j)];
    if (reach <= 1.0) return true;
  }
  return false;
}

std::string ConstrainedRegion::to_string() const {
  std::ostringstream os;
  os << "dims=" << uspn::to_string(dims);
  for (const auto& q : inequalities)
    os << " [" << uspn::to_string(q.lhs) << "<=" << uspn::to_string(q.rhs) << "-1]";
  if (hyperplane)
    os << " [" << uspn::to_string(hyperplane->plus) << "==" << uspn::to_string(hyperplane->minus)
       << "]";
  return os.str();
}

RegionResult constrained_integral(const ConstrainedRegion& region,
                                  std::span<const FourierProfile> profiles,
                                  const AffineWeight& weight, const RegionOptions& options) {
  region.validate();
  if (profiles.size() != region.dims.size())
    throw DomainError("constrained_integral: one profile per dim");
  if (region.dims.size() > static_cast<std::size_t>(kMaxDims))
    throw CapacityError("constrained_integral: at most 6 dims");

  // Effective bounds enter the emptiness check too.
  ConstrainedRegion eff = region;
  eff.upper_bounds = effective_bounds(region, profiles);
  if (eff.provably_empty()) return {0.0, 0.0, options.method};

  switch (options.method) {
    case RegionMethod::factorized: {
      auto f = try_factorized(eff, profiles, weight);
      if (!f) throw DomainError("constrained_integral: region does not factorize");
      return *f;
    }
    case RegionMethod::nested: {
      const Reduced red = reduce(eff, profiles, weight);
      return {Nested(red).run(), 0.0, RegionMethod::nested};
    }
    case RegionMethod::quasi_monte_carlo:
      return qmc(reduce(eff, profiles, weight), options);
    case RegionMethod::automatic:
      break;
  }
  if (auto f = try_factorized(eff, profiles, weight)) return *f;
  const Reduced red = reduce(eff, profiles, weight);
  if (red.m <= 4) return {Nested(red).run(), 0.0, RegionMethod::nested};
  return qmc(red, options);
}

// ---------------------------------------------------------------- signed sums

SignedSum::SignedSum(std::vector<FourierProfile> profiles, std::vector<int> signs,
                     std::vector<double> bounds)
    : profiles_(std::move(profiles)), signs_(std::move(signs)), bounds_(std::move(bounds)) {
  if (profiles_.empty() || profiles_.size() != signs_.size())
    throw DomainError("SignedSum: need one sign per profile");
  if (bounds_.empty())
    for (const auto& p : profiles_) bounds_.push_back(p.sigma());
  if (bounds_.size() != profiles_.size()) throw DomainError("SignedSum: one bound per profile");
  for (std::size_t k = 0; k < profiles_.size(); ++k) {
    if (signs_[k] != 1 && signs_[k] != -1) throw DomainError("SignedSum: signs must be +-1");
    bounds_[k] = std::min(bounds_[k], profiles_[k].sigma());
    const double mass = profiles_[k].antiderivative(bounds_[k]);
    mass_prefix_.push_back(k == 0 ? mass : mass_prefix_.back() * mass);
    std::vector<double> next;
    const std::vector<double> prev = k == 0 ? std::vector<double>{0.0} : breaks_.back();
    for (double b : prev) {
      next.push_back(b);
      next.push_back(b + signs_[k] * bounds_[k]);
    }
    sort_unique(next);
    breaks_.push_back(std::move(next));
  }
}

double SignedSum::tail(double c) const { return tail_rec(profiles_.size() - 1, c); }
double SignedSum::density(double t) const { return density_rec(profiles_.size() - 1, t); }

double SignedSum::tail_rec(std::size_t k, double c) const {
  const auto& br = breaks_[k];
  if (c <= br.front()) return mass_prefix_[k];
  if (c >= br.back()) return 0.0;
  const auto& p = profiles_[k];
  const double b = bounds_[k];
  const int s = signs_[k];
  if (k == 0) {
    if (s > 0) return p.antiderivative(b) - p.antiderivative(std::max(c, 0.0));
    return p.antiderivative(std::min(-c, b));
  }
  // int_0^b fhat(u) tail_{k-1}(c - s u) du, split where c - s u hits a breakpoint
  const auto& prev = breaks_[k - 1];
  std::vector<double> cuts{0.0, b};
  for (double q : prev) {
    const double u = s * (c - q);
    if (u > 0.0 && u < b) cuts.push_back(u);
  }
  sort_unique(cuts);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = c - s * 0.5 * (cuts[i] + cuts[i + 1]);
    if (mid <= prev.front()) {
      acc += mass_prefix_[k - 1] * (p.antiderivative(cuts[i + 1]) - p.antiderivative(cuts[i]));
    } else if (mid < prev.back()) {
      acc += gl20([&](double u) { return p(u) * tail_rec(k - 1, c - s * u); }, cuts[i],
                  cuts[i + 1]);
    }
  }
  return acc;
}

double SignedSum::density_rec(std::size_t k, double t) const {
  const auto& br = breaks_[k];
  if (t < br.front() || t > br.back()) return 0.0;
  const auto& p = profiles_[k];
  const double b = bounds_[k];
  const int s = signs_[k];
  if (k == 0) {
    const double u = s * t;
    return (u >= 0.0 && u <= b) ? p(u) : 0.0;
  }
  const auto& prev = breaks_[k - 1];
  std::vector<double> cuts{0.0, b};
  for (double q : prev) {
    const double u = s * (t - q);
    if (u > 0.0 && u < b) cuts.push_back(u);
  }
  sort_unique(cuts);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = t - s * 0.5 * (cuts[i] + cuts[i + 1]);
    if (mid <= prev.front() || mid >= prev.back()) continue;
    acc += gl20([&](double u) { return p(u) * density_rec(k - 1, t - s * u); }, cuts[i],
                cuts[i + 1]);
  }
  return acc;
}

double density_product_integral(const SignedSum& a, const SignedSum& b, double c, double slope,
                                double intercept) {
  const double lo = std::max({c, a.min_value(), b.min_value()});
  const double hi = std::min(a.max_value(), b.max_value());
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (const auto* s : {&a, &b})
    for (double q : s->breakpoints())
      if (q > lo && q < hi) cuts.push_back(q);
  sort_unique(cuts);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += gl20([&](double t) { return (slope * t + intercept) * a.density(t) * b.density(t); },
                cuts[i], cuts[i + 1]);
  }
  return acc;
}

}  // namespace uspn
