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

#include "uspn/jstar.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "uspn/errors.hpp"

namespace uspn {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPoleTol = 1e-12;
constexpr double kSeriesRadius = 1e-4;
constexpr int kMaxArgs = 16;

// x - 2 pi i k for the nearest k.
cplx reduce_to_pole(cplx x) {
  const double k = std::round(x.imag() / kTwoPi);
  return {x.real(), x.imag() - kTwoPi * k};
}

void check_pole(cplx r, const char* who) {
  if (std::abs(r) < kPoleTol) throw SingularityError(std::string(who) + ": argument at a pole of z");
}

cplx cexpm1(cplx x) {
  const double a = x.real(), b = x.imag();
  const double s = std::sin(0.5 * b);
  const double e = std::expm1(a);
  return {e * std::cos(b) - 2.0 * s * s, (e + 1.0) * std::sin(b)};
}

void check_size(std::size_t n) {
  if (n > kMaxArgs) throw CapacityError("j_star: at most 16 arguments");
}

// Sum over pair/singleton partitions of a bitmask, by dynamic programming on
// the lowest set bit.
class PartitionSum {
 public:
  PartitionSum(std::span<const cplx> A, std::span<const cplx> D, unsigned dmask)
      : n_(static_cast<int>(A.size())) {
    for (int i = 0; i < n_; ++i) {
      if (dmask & (1u << i)) continue;
      single_[i] = h_factor(D, A.subspan(i, 1));
      for (int j = i + 1; j < n_; ++j)
        if (!(dmask & (1u << j))) pair_[i][j] = z_log_deriv_prime(A[i] + A[j]);
    }
  }

  cplx operator()(unsigned mask) {
    memo_.assign(std::size_t{1} << n_, cplx{});
    done_.assign(std::size_t{1} << n_, false);
    return eval(mask);
  }

 private:
  cplx eval(unsigned mask) {
    if (mask == 0) return 1.0;
    if (done_[mask]) return memo_[mask];
    const int i = std::countr_zero(mask);
    const unsigned rest = mask & ~(1u << i);
    cplx s = single_[i] * eval(rest);
    for (unsigned r = rest; r != 0; r &= r - 1) {
      const int j = std::countr_zero(r);
      s += pair_[i][j] * eval(rest & ~(1u << j));
    }
    done_[mask] = true;
    memo_[mask] = s;
    return s;
  }

  int n_;
  std::array<cplx, kMaxArgs> single_{};
  std::array<std::array<cplx, kMaxArgs>, kMaxArgs> pair_{};
  std::vector<cplx> memo_;
  std::vector<bool> done_;
};

std::vector<cplx> pick(std::span<const cplx> A, unsigned mask) {
  std::vector<cplx> out;
  for (std::size_t i = 0; i < A.size(); ++i)
    if (mask & (1u << i)) out.push_back(A[i]);
  return out;
}

cplx d_term(int N, std::span<const cplx> A, unsigned dmask) {
  const auto D = pick(A, dmask);
  cplx sum_d = 0.0;
  for (cplx d : D) sum_d += d;
  const unsigned full = (1u << A.size()) - 1;
  PartitionSum partitions(A, D, dmask);
  return std::exp(-2.0 * static_cast<double>(N) * sum_d) * yz_prefactor(D) *
         partitions(full & ~dmask);
}

}  // namespace

cplx z_func(cplx x) {
  const cplx r = reduce_to_pole(x);
  check_pole(r, "z");
  if (std::abs(r) < kSeriesRadius) {
    // z(r) = 1/r + 1/2 + r/12 - r^3/720
    return 1.0 / r + 0.5 + r / 12.0 - r * r * r / 720.0;
  }
  return -1.0 / cexpm1(-x);
}

cplx z_log_deriv(cplx x) {
  const cplx r = reduce_to_pole(x);
  check_pole(r, "z'/z");
  if (std::abs(r) < kSeriesRadius) {
    const cplx r2 = r * r;
    return -1.0 / r + 0.5 - r / 12.0 + r * r2 / 720.0 - r * r2 * r2 / 30240.0;
  }
  return -1.0 / cexpm1(x);
}

cplx z_log_deriv_prime(cplx x) {
  const cplx r = reduce_to_pole(x);
  check_pole(r, "(z'/z)'");
  if (std::abs(r) < kSeriesRadius) {
    const cplx r2 = r * r;
    return 1.0 / r2 - 1.0 / 12.0 + r2 / 240.0 - r2 * r2 / 6048.0;
  }
  if (x.real() > 0.0) {
    const cplx e = cexpm1(-x);
    return std::exp(-x) / (e * e);
  }
  const cplx e = cexpm1(x);
  return std::exp(x) / (e * e);
}

cplx h_factor(std::span<const cplx> D, std::span<const cplx> W) {
  if (W.empty()) return 1.0;
  if (W.size() == 2) return z_log_deriv_prime(W[0] + W[1]);
  if (W.size() != 1) throw DomainError("h_factor: block size must be 0, 1 or 2");
  const cplx a = W[0];
  cplx s = z_log_deriv(2.0 * a);
  for (cplx d : D) s += z_log_deriv(a - d) - z_log_deriv(a + d);
  return s;
}

cplx yz_prefactor(std::span<const cplx> D) {
  cplx p = (D.size() % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < D.size(); ++i) {
    p *= z_func(-2.0 * D[i]);
    for (std::size_t j = i + 1; j < D.size(); ++j) {
      p *= z_func(D[i] + D[j]) * z_func(-D[i] - D[j]) /
           (z_func(D[i] - D[j]) * z_func(D[j] - D[i]));
    }
  }
  return p;
}

cplx yz_sqrt_argument(std::span<const cplx> D) {
  cplx zdd = 1.0, zmm = 1.0, ym = 1.0, yd = 1.0, zdag = 1.0;
  for (std::size_t i = 0; i < D.size(); ++i) {
    yd *= z_func(2.0 * D[i]);
    ym *= z_func(-2.0 * D[i]);
    for (std::size_t j = 0; j < D.size(); ++j) {
      zdd *= z_func(D[i] + D[j]);
      zmm *= z_func(-D[i] - D[j]);
      if (i != j) zdag *= z_func(-D[i] + D[j]);
    }
  }
  return zdd * zmm * ym / (yd * zdag * zdag);
}

cplx j_star_shell(int N, std::span<const cplx> A, int k) {
  check_size(A.size());
  cplx s = 0.0;
  const unsigned count = 1u << A.size();
  for (unsigned m = 0; m < count; ++m)
    if (std::popcount(m) == k) s += d_term(N, A, m);
  return s;
}

cplx j_star(int N, std::span<const cplx> A) {
  return j_star_trunc(N, A, static_cast<int>(A.size()) + 1);
}

cplx j_star_trunc(int N, std::span<const cplx> A, int q) {
  check_size(A.size());
  cplx s = 0.0;
  const unsigned count = 1u << A.size();
  for (unsigned m = 0; m < count; ++m)
    if (std::popcount(m) < q) s += d_term(N, A, m);
  return s;
}

std::vector<JStarTerm> j_star_terms(int N, std::span<const cplx> A, int q) {
  check_size(A.size());
  std::vector<JStarTerm> out;
  const IndexSet all = range_set(0, static_cast<int>(A.size()) - 1);
  for_each_subset(all, [&](const IndexSet& D) {
    if (static_cast<int>(D.size()) >= q) return;
    std::vector<cplx> dv;
    cplx sum_d = 0.0;
    for (int i : D) {
      dv.push_back(A[i]);
      sum_d += A[i];
    }
    const cplx head = std::exp(-2.0 * static_cast<double>(N) * sum_d) * yz_prefactor(dv);
    for_each_pair_singleton_partition(set_difference(all, D), [&](const PairSingletonPartition& p) {
      cplx v = head;
      for (const Block& b : p) {
        if (b.is_pair()) {
          const std::array<cplx, 2> w{A[b.first], A[b.second]};
          v *= h_factor(dv, w);
        } else {
          v *= h_factor(dv, A.subspan(b.first, 1));
        }
      }
      out.push_back({D, p, v});
    });
  });
  return out;
}

void check_argument_margin(std::span<const cplx> A, double eps) {
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = i; j < A.size(); ++j) {
      if (std::abs(reduce_to_pole(A[i] + A[j])) < eps)
        throw SingularityError("argument set: pairwise sum within margin of a pole");
    }
  }
}

// Regrouped expansions. These are written out directly from the grouped
// sums, without the partition recursion used above.
namespace {

struct Grouped {
  int N;
  std::span<const cplx> z;

  cplx zl(cplx x) const { return z_log_deriv(x); }

  cplx matching_sum(const IndexSet& S) const {
    cplx s = 0.0;
    if (S.empty()) return 1.0;
    for_each_perfect_matching(S, [&](const Matching& m) {
      cplx p = 1.0;
      for (auto [a, b] : m) p *= z_log_deriv_prime(z[a] + z[b]);
      s += p;
    });
    return s;
  }

  cplx outer(const IndexSet& S2c) const {
    cplx p = 1.0;
    for (int l : S2c) p *= zl(2.0 * z[l]);
    return p;
  }

  // prod_{i in I} -z'/z(z_i + z_d) * prod_{j in Ic \ d} z'/z(z_j - z_d)
  cplx arm(const IndexSet& I, const IndexSet& Ic, int d) const {
    cplx p = 1.0;
    for (int i : I) p *= -zl(z[i] + z[d]);
    for (int j : Ic)
      if (j != d) p *= zl(z[j] - z[d]);
    return p;
  }

  cplx one_shift(const IndexSet& C) const {
    cplx s = 0.0;
    for_each_subset(C, [&](const IndexSet& I) {
      if (I.size() == C.size()) return;
      const IndexSet Ic = set_difference(C, I);
      for (int d : Ic) {
        s += arm(I, Ic, d) * (-std::exp(-2.0 * N * z[d]) * z_func(-2.0 * z[d]));
      }
    });
    return s;
  }

  cplx pair_factor(int d, int g) const {
    return std::exp(-2.0 * N * (z[d] + z[g])) * z_func(-2.0 * z[d]) * z_func(-2.0 * z[g]) *
           z_func(z[d] + z[g]) * z_func(-z[d] - z[g]) /
           (z_func(z[d] - z[g]) * z_func(z[g] - z[d]));
  }

  cplx two_shift(const IndexSet& C, double weight) const {
    cplx s = 0.0;
    for_each_four_way_split(C, [&](const FourWaySplit& w) {
      for (int d : w.i1c)
        for (int g : w.i2c) s += pair_factor(d, g) * arm(w.i1, w.i1c, d) * arm(w.i2, w.i2c, g);
    });
    return weight * s;
  }

  cplx q2_part(bool with_pairs, double pair_weight) const {
    const IndexSet Q = range_set(0, static_cast<int>(z.size()) - 1);
    cplx total = 0.0;
    for_each_subset(Q, [&](const IndexSet& S2) {
      cplx inner = (S2.size() % 2 == 0) ? matching_sum(S2) : cplx{0.0};
      for_each_subset(S2, [&](const IndexSet& S3) {
        if (S3.size() % 2 != 0 || S3.size() == S2.size()) return;
        const cplx m = matching_sum(S3);
        const IndexSet rest = set_difference(S2, S3);
        inner += m * one_shift(rest);
        if (with_pairs) inner += m * two_shift(rest, pair_weight);
      });
      total += outer(set_difference(Q, S2)) * inner;
    });
    return total;
  }
};

double pair_weight(PairCounting c) { return c == PairCounting::unordered ? 0.5 : 1.0; }

}  // namespace

cplx j_star_grouped_q2(int N, std::span<const cplx> A) {
  check_size(A.size());
  return Grouped{N, A}.q2_part(false, 0.0);
}

cplx j_star_grouped_q3(int N, std::span<const cplx> A, PairCounting counting) {
  check_size(A.size());
  return Grouped{N, A}.q2_part(true, pair_weight(counting));
}

cplx j_star_blocks_q3(int N, std::span<const cplx> A, PairCounting counting) {
  check_size(A.size());
  const Grouped g{N, A};
  const IndexSet Q = range_set(0, static_cast<int>(A.size()) - 1);

  // sum over even R of prod_{rest \ R} H_D(z_l) * matchings(R)
  auto r_sum = [&](const IndexSet& rest, std::span<const cplx> D) {
    cplx s = 0.0;
    for_each_subset(rest, [&](const IndexSet& R) {
      if (R.size() % 2 != 0) return;
      cplx p = g.matching_sum(R);
      for (int l : set_difference(rest, R)) p *= h_factor(D, A.subspan(l, 1));
      s += p;
    });
    return s;
  };

  cplx total = r_sum(Q, {});
  for (int d : Q) {
    const std::array<cplx, 1> D{A[d]};
    total += -std::exp(-2.0 * N * A[d]) * z_func(-2.0 * A[d]) *
             r_sum(set_difference(Q, IndexSet{d}), D);
  }
  for (int d : Q) {
    for (int e : Q) {
      if (e == d || (counting == PairCounting::unordered && e < d)) continue;
      const std::array<cplx, 2> D{A[d], A[e]};
      total += g.pair_factor(d, e) * r_sum(set_difference(Q, make_index_set({d, e})), D);
    }
  }
  return total;
}

}  // namespace uspn
