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

#include "uspn/closedform.hpp"

#include <cmath>
#include <map>

#include "uspn/errors.hpp"

namespace uspn {
namespace {

double ipow(double b, std::size_t e) {
  double r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= b;
  return r;
}

double parity(std::size_t k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::vector<FourierProfile> profiles_of(std::span<const TestFunction> fns, const IndexSet& dims) {
  std::vector<FourierProfile> p;
  for (int i : dims) p.push_back(fns[i].profile());
  return p;
}

std::vector<double> sigmas_of(std::span<const TestFunction> fns, const IndexSet& dims) {
  std::vector<double> s;
  for (int i : dims) s.push_back(fns[i].sigma());
  return s;
}

// int over u >= 0 with sum_I u <= sum_Ic u - 1.
RegionResult single_region(std::span<const TestFunction> fns, const IndexSet& I,
                           const IndexSet& Ic, const RegionOptions& opt) {
  ConstrainedRegion r;
  r.dims = set_union(I, Ic);
  r.upper_bounds = sigmas_of(fns, r.dims);
  r.inequalities.push_back({I, Ic});
  return constrained_integral(r, profiles_of(fns, r.dims), {}, opt);
}

// Pair of regions sharing the two constraints: the plain part and the
// hyperplane part with weight (sum_I2c u - sum_I2 u - 1).
struct DoubleRegion {
  RegionResult plain;
  RegionResult delta;
};

DoubleRegion double_region(std::span<const TestFunction> fns, const IndexSet& I1,
                           const IndexSet& I1c, const IndexSet& I2, const IndexSet& I2c,
                           const RegionOptions& opt) {
  ConstrainedRegion r;
  r.dims = set_union(set_union(I1, I1c), set_union(I2, I2c));
  r.upper_bounds = sigmas_of(fns, r.dims);
  r.inequalities.push_back({I1, I1c});
  r.inequalities.push_back({I2, I2c});
  const auto prof = profiles_of(fns, r.dims);
  DoubleRegion out;
  out.plain = constrained_integral(r, prof, {}, opt);
  r.hyperplane = Hyperplane{set_union(I1c, I2), set_union(I1, I2c)};
  AffineWeight w{-1.0, {}};
  for (int j : I2c) w.terms.emplace_back(j, 1.0);
  for (int i : I2) w.terms.emplace_back(i, -1.0);
  out.delta = constrained_integral(r, prof, w, opt);
  return out;
}

class Assembler {
 public:
  Assembler(std::span<const TestFunction> fns, int q, const ClosedFormOptions& opt)
      : fns_(fns), q_(q), opt_(opt), n_(static_cast<int>(fns.size())) {
    abs_pair_.assign(n_, std::vector<double>(n_, 0.0));
    for (int a = 0; a < n_; ++a)
      for (int b = a + 1; b < n_; ++b)
        abs_pair_[a][b] = abs_pair_[b][a] = integral_abs_u_pair(fns[a], fns[b]);
  }

  ClosedFormBreakdown run() {
    out_.method = q_ == 1 ? Method::closed_form_q1
                          : (q_ == 2 ? Method::closed_form_q2 : Method::closed_form_q3);
    out_.n = n_;
    const IndexSet all = range_set(0, n_ - 1);
    for_each_subset(all, [&](const IndexSet& Q) {
      const IndexSet M = set_difference(all, Q);
      double mfac = 1.0;
      for (int m : M) mfac *= integral_f(fns_[m]);
      for_each_subset(Q, [&](const IndexSet& S2) {
        const IndexSet S2c = set_difference(Q, S2);
        double cfac = mfac;
        for (int l : S2c) cfac *= -0.5 * integral_fhat(fns_[l]);
        const std::string head =
            "Q=" + to_string(Q) + " M=" + to_string(M) + " S2=" + to_string(S2);
        assemble(S2, cfac, head);
      });
    });
    double total = 0.0;
    for (const auto& t : out_.terms) total += t.value;
    out_.total = total;
    return out_;
  }

 private:
  double matching_sum(const IndexSet& S) {
    if (S.empty()) return 1.0;
    double s = 0.0;
    for_each_perfect_matching(S, [&](const Matching& m) {
      double p = 1.0;
      for (auto [a, b] : m) p *= abs_pair_[a][b];
      s += p;
    });
    return s;
  }

  void add(std::string desc, double value, double err) {
    out_.terms.push_back({std::move(desc), value});
    out_.error += err;
  }

  const RegionResult& region1(const IndexSet& I, const IndexSet& Ic) {
    const std::string key = to_string(I) + "|" + to_string(Ic);
    auto it = single_.find(key);
    if (it == single_.end()) it = single_.emplace(key, single_region(fns_, I, Ic, opt_.region)).first;
    return it->second;
  }

  const DoubleRegion& region2(const FourWaySplit& w) {
    const std::string key =
        to_string(w.i1) + "|" + to_string(w.i1c) + "|" + to_string(w.i2) + "|" + to_string(w.i2c);
    auto it = double_.find(key);
    if (it == double_.end())
      it = double_.emplace(key, double_region(fns_, w.i1, w.i1c, w.i2, w.i2c, opt_.region)).first;
    return it->second;
  }

  void assemble(const IndexSet& S2, double cfac, const std::string& head) {
    if (S2.size() % 2 == 0) {
      const double v = cfac * ipow(2.0, S2.size() / 2) * matching_sum(S2);
      add(head + " pairs", v, 0.0);
    }
    if (q_ < 2 || S2.empty()) return;

    for_each_subset(S2, [&](const IndexSet& S3) {
      if (S3.size() % 2 != 0 || S3.size() == S2.size()) return;
      const IndexSet S3c = set_difference(S2, S3);
      const double pre = cfac * -0.5 * ipow(2.0, S3.size() / 2) * matching_sum(S3);
      if (pre == 0.0) return;
      for_each_subset(S3c, [&](const IndexSet& I) {
        if (I.size() == S3c.size()) return;
        const IndexSet Ic = set_difference(S3c, I);
        const RegionResult& r = region1(I, Ic);
        if (r.value == 0.0) return;
        // The q = 2 and q = 3 statements write this sign differently; the two
        // agree because (-1)^{|I|} (-2)^{|I u Ic|} = (-1)^{|Ic|} 2^{|I u Ic|}.
        const double sign = q_ == 2 ? parity(I.size()) * ipow(-2.0, S3c.size())
                                    : parity(Ic.size()) * ipow(2.0, S3c.size());
        add(head + " S3=" + to_string(S3) + " I=" + to_string(I) + " Ic=" + to_string(Ic),
            pre * sign * r.value, std::abs(pre * sign) * r.error);
      });
    });
    if (q_ < 3) return;

    const double weight = opt_.pair_counting == PairCounting::unordered ? 0.5 : 1.0;
    for_each_subset(S2, [&](const IndexSet& S4) {
      if (S4.size() % 2 != 0 || S4.size() == S2.size()) return;
      const IndexSet S4c = set_difference(S2, S4);
      const double pre = cfac * ipow(2.0, S4.size() / 2) * matching_sum(S4) * weight;
      if (pre == 0.0) return;
      for_each_four_way_split(S4c, [&](const FourWaySplit& w) {
        const DoubleRegion& r = region2(w);
        if (r.plain.value == 0.0 && r.delta.value == 0.0) return;
        const double sign = parity(w.i1c.size() + w.i2c.size()) * ipow(2.0, S4c.size());
        const double v = pre * sign * (0.25 * r.plain.value - r.delta.value);
        add(head + " S4=" + to_string(S4) + " I1=" + to_string(w.i1) + " I1c=" +
                to_string(w.i1c) + " I2=" + to_string(w.i2) + " I2c=" + to_string(w.i2c),
            v, std::abs(pre * sign) * (0.25 * r.plain.error + r.delta.error));
      });
    });
  }

  std::span<const TestFunction> fns_;
  int q_;
  ClosedFormOptions opt_;
  int n_;
  std::vector<std::vector<double>> abs_pair_;
  std::map<std::string, RegionResult> single_;
  std::map<std::string, DoubleRegion> double_;
  ClosedFormBreakdown out_;
};

double total_sigma(std::span<const TestFunction> fns) {
  double s = 0.0;
  for (const auto& f : fns) s += f.sigma();
  return s;
}

void require_support(std::span<const TestFunction> fns, double bound, bool strict,
                     const char* who) {
  const double s = total_sigma(fns);
  if (strict ? !(s < bound) : !(s <= bound))
    throw DomainError(std::string(who) + ": total Fourier support " + std::to_string(s) +
                      " outside the range of the formula");
}

}  // namespace

nlohmann::json ClosedFormBreakdown::to_json() const {
  nlohmann::json terms_json = nlohmann::json::array();
  for (const auto& t : terms) terms_json.push_back({{"term", t.descriptor}, {"value", t.value}});
  return {{"method", to_string(method)}, {"n", n},           {"total", total},
          {"error", error},              {"terms", terms_json}};
}

DensityEstimate ClosedFormBreakdown::estimate() const {
  DensityEstimate e;
  e.value = total;
  e.std_error = error;
  e.n = n;
  e.N = 0;
  e.method = method;
  return e;
}

ClosedFormBreakdown rubinstein_rhs(std::span<const TestFunction> fns,
                                   const ClosedFormOptions& opt) {
  require_support(fns, 1.0, false, "rubinstein_rhs");
  return Assembler(fns, 1, opt).run();
}

ClosedFormBreakdown gao_rhs(std::span<const TestFunction> fns, const ClosedFormOptions& opt) {
  require_support(fns, 2.0, false, "gao_rhs");
  return Assembler(fns, 2, opt).run();
}

ClosedFormBreakdown support3_rhs(std::span<const TestFunction> fns,
                                 const ClosedFormOptions& opt) {
  require_support(fns, 3.0, true, "support3_rhs");
  if (fns.size() > opt.max_factors)
    throw CapacityError("support3_rhs: more factors than max_factors");
  return Assembler(fns, 3, opt).run();
}

ClosedFormBreakdown rubinstein_rhs(const TestFunctionProduct& p, const ClosedFormOptions& opt) {
  return rubinstein_rhs(p.span(), opt);
}
ClosedFormBreakdown gao_rhs(const TestFunctionProduct& p, const ClosedFormOptions& opt) {
  return gao_rhs(p.span(), opt);
}
ClosedFormBreakdown support3_rhs(const TestFunctionProduct& p, const ClosedFormOptions& opt) {
  return support3_rhs(p.span(), opt);
}

ClosedFormBreakdown closed_form(const TestFunctionProduct& p, const ClosedFormOptions& opt) {
  const auto q = p.support_class();
  if (!q) throw DomainError("closed_form: total Fourier support must be below 3");
  if (*q == 1) return rubinstein_rhs(p, opt);
  if (*q == 2) return gao_rhs(p, opt);
  return support3_rhs(p, opt);
}

double lemma1_rhs(const TestFunction& f1, const TestFunction& f2) {
  return 2.0 * integral_abs_u_pair(f1, f2);
}

double lemma2_rhs(const TestFunction& f) { return -0.5 * integral_fhat(f); }

double lemma3_rhs(const TestFunction& f) { return integral_f(f); }

double lemma4_rhs(std::span<const TestFunction> fns, const IndexSet& A, const IndexSet& B,
                  const RegionOptions& opt) {
  if (B.empty() || !disjoint(A, B)) throw DomainError("lemma4_rhs: need disjoint A, B, |B| >= 1");
  const std::size_t m = A.size() + B.size();
  return -0.5 * ipow(2.0, m) * parity(B.size()) * single_region(fns, A, B, opt).value;
}

double lemma5_rhs(std::span<const TestFunction> fns, const IndexSet& A1, const IndexSet& B1,
                  const IndexSet& A2, const IndexSet& B2, const RegionOptions& opt) {
  if (B1.empty() || B2.empty()) throw DomainError("lemma5_rhs: need |B1|, |B2| >= 1");
  const IndexSet all = set_union(set_union(A1, B1), set_union(A2, B2));
  if (all.size() != A1.size() + B1.size() + A2.size() + B2.size())
    throw DomainError("lemma5_rhs: sets must be disjoint");
  const auto r = double_region(fns, A1, B1, A2, B2, opt);
  return ipow(2.0, all.size()) * parity(B1.size() + B2.size()) *
         (0.25 * r.plain.value - r.delta.value);
}

}  // namespace uspn
