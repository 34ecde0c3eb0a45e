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
#include <set>

#include "uspn/combinat.hpp"
#include "uspn/errors.hpp"

using namespace uspn;

namespace {

using Canon = std::vector<std::vector<int>>;

Canon canon_blocks(std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

Canon canon(const PairSingletonPartition& p) {
  std::vector<std::vector<int>> blocks;
  for (const auto& b : p) blocks.push_back(b.is_pair() ? std::vector{b.first, b.second} : std::vector{b.first});
  return canon_blocks(blocks);
}

Canon canon(const Matching& m) {
  std::vector<std::vector<int>> blocks;
  for (const auto& [a, b] : m) blocks.push_back({a, b});
  return canon_blocks(blocks);
}

// All set partitions via restricted growth strings, filtered to block size <= 2.
std::set<Canon> brute_pair_singleton(const IndexSet& s) {
  std::set<Canon> out;
  const std::size_t m = s.size();
  std::vector<int> rgs(m, 0);
  for (;;) {
    int nblocks = 0;
    for (int v : rgs) nblocks = std::max(nblocks, v + 1);
    std::vector<std::vector<int>> blocks(nblocks);
    for (std::size_t i = 0; i < m; ++i) blocks[rgs[i]].push_back(s[i]);
    bool ok = true;
    for (const auto& b : blocks) ok = ok && b.size() <= 2;
    if (ok) out.insert(canon_blocks(blocks));
    // Next restricted growth string.
    std::size_t i = m;
    bool advanced = false;
    while (i > 1) {
      --i;
      int prefix_max = 0;
      for (std::size_t j = 0; j < i; ++j) prefix_max = std::max(prefix_max, rgs[j]);
      if (rgs[i] <= prefix_max) {
        ++rgs[i];
        std::fill(rgs.begin() + i + 1, rgs.end(), 0);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return out;
}

std::set<Canon> brute_matchings(const IndexSet& s) {
  std::set<Canon> out;
  std::vector<int> p(s.begin(), s.end());
  do {
    std::vector<std::vector<int>> blocks;
    for (std::size_t i = 0; i + 1 < p.size(); i += 2) blocks.push_back({p[i], p[i + 1]});
    out.insert(canon_blocks(blocks));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

long long double_factorial(int k) {
  long long r = 1;
  for (int i = k; i > 1; i -= 2) r *= i;
  return r;
}

}  // namespace

TEST(Combinat, TwoWaySplits) {
  const auto one = two_way_splits({1});
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0].q, IndexSet{1});
  EXPECT_TRUE(one[0].m.empty());
  EXPECT_TRUE(one[1].q.empty());
  EXPECT_EQ(one[1].m, IndexSet{1});
  EXPECT_EQ(two_way_splits({1, 2, 3}).size(), 8u);
  const auto none = two_way_splits({});
  ASSERT_EQ(none.size(), 1u);
  EXPECT_TRUE(none[0].q.empty() && none[0].m.empty());
  for (int m = 0; m <= 8; ++m) {
    const auto s = range_set(1, m);
    std::set<std::pair<IndexSet, IndexSet>> seen;
    for (const auto& sp : two_way_splits(s)) {
      EXPECT_TRUE(disjoint(sp.q, sp.m));
      EXPECT_EQ(set_union(sp.q, sp.m), s);
      seen.insert({sp.q, sp.m});
    }
    EXPECT_EQ(seen.size(), std::size_t{1} << m);
  }
}

TEST(Combinat, EvenSubsets) {
  const std::vector<IndexSet> expected{{}, {1, 2}, {1, 5}, {1, 7}, {2, 5}, {2, 7}, {5, 7}, {1, 2, 5, 7}};
  EXPECT_EQ(even_subsets({1, 2, 5, 7}), expected);
  EXPECT_EQ(even_subsets({}), std::vector<IndexSet>{IndexSet{}});
  EXPECT_EQ(proper_even_subsets({1, 2}), std::vector<IndexSet>{IndexSet{}});
  EXPECT_TRUE(proper_even_subsets({}).empty());
  for (int m = 0; m <= 8; ++m) {
    const auto s = range_set(1, m);
    EXPECT_EQ(subsets(s).size(), std::size_t{1} << m);
    EXPECT_EQ(even_subsets(s).size(), m == 0 ? 1u : std::size_t{1} << (m - 1));
    std::set<IndexSet> uniq;
    for (const auto& t : subsets(s)) uniq.insert(t);
    EXPECT_EQ(uniq.size(), std::size_t{1} << m);
  }
}

TEST(Combinat, PerfectMatchings) {
  const auto ms = perfect_matchings({1, 2, 5, 7});
  std::set<Canon> got;
  for (const auto& m : ms) got.insert(canon(m));
  const std::set<Canon> expected{{{1, 5}, {2, 7}}, {{1, 7}, {2, 5}}, {{1, 2}, {5, 7}}};
  EXPECT_EQ(got, expected);
  EXPECT_EQ(ms.size(), 3u);
  ASSERT_EQ(perfect_matchings({}).size(), 1u);
  EXPECT_TRUE(perfect_matchings({})[0].empty());
  EXPECT_EQ(perfect_matchings(range_set(1, 6)).size(), 15u);
  EXPECT_THROW(perfect_matchings({1, 2, 3}), DomainError);
  for (int m = 0; m <= 8; m += 2) {
    const auto s = range_set(1, m);
    std::set<Canon> mine;
    for (const auto& x : perfect_matchings(s)) mine.insert(canon(x));
    EXPECT_EQ(mine.size(), static_cast<std::size_t>(double_factorial(m - 1)));
    EXPECT_EQ(mine, brute_matchings(s));
  }
}

TEST(Combinat, PairSingletonPartitions) {
  const std::vector<long long> involutions{1, 1, 2, 4, 10, 26, 76, 232, 764};
  for (int m = 0; m <= 8; ++m) {
    const auto s = range_set(1, m);
    const auto parts = pair_singleton_partitions(s);
    EXPECT_EQ(static_cast<long long>(parts.size()), involutions[m]);
    std::set<Canon> mine;
    for (const auto& p : parts) {
      std::vector<int> covered;
      for (const auto& b : p) {
        covered.push_back(b.first);
        if (b.is_pair()) covered.push_back(b.second);
      }
      EXPECT_EQ(make_index_set(covered), s);
      mine.insert(canon(p));
    }
    EXPECT_EQ(mine.size(), parts.size());
    EXPECT_EQ(mine, brute_pair_singleton(s));
  }
  const auto two = pair_singleton_partitions({1, 2});
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(pair_singleton_partitions({}).size(), 1u);
}

TEST(Combinat, FourWaySplits) {
  const auto two = four_way_splits_with_nonempty({1, 2});
  ASSERT_EQ(two.size(), 2u);
  for (const auto& sp : two) {
    EXPECT_TRUE(sp.i1.empty());
    EXPECT_TRUE(sp.i2.empty());
    EXPECT_EQ(sp.i1c.size(), 1u);
    EXPECT_EQ(sp.i2c.size(), 1u);
  }
  EXPECT_TRUE(four_way_splits_with_nonempty({1}).empty());
  for (int m = 2; m <= 6; ++m) {
    const auto s = range_set(1, m);
    // Brute force over 4^m labelings.
    long long brute = 0;
    long long total = 1;
    for (int i = 0; i < m; ++i) total *= 4;
    for (long long code = 0; code < total; ++code) {
      bool has1 = false, has3 = false;
      long long c = code;
      for (int i = 0; i < m; ++i, c /= 4) {
        has1 = has1 || c % 4 == 1;
        has3 = has3 || c % 4 == 3;
      }
      brute += has1 && has3;
    }
    const auto splits = four_way_splits_with_nonempty(s);
    EXPECT_EQ(static_cast<long long>(splits.size()), brute);
    std::set<std::vector<IndexSet>> uniq;
    for (const auto& sp : splits) {
      EXPECT_EQ(set_union(set_union(sp.i1, sp.i1c), set_union(sp.i2, sp.i2c)), s);
      uniq.insert({sp.i1, sp.i1c, sp.i2, sp.i2c});
    }
    EXPECT_EQ(uniq.size(), splits.size());
  }
}

TEST(Combinat, IndexSetValidation) {
  EXPECT_EQ(make_index_set({3, 1, 2}), (IndexSet{1, 2, 3}));
  EXPECT_THROW(make_index_set({1, 1}), DomainError);
  EXPECT_EQ(to_string(IndexSet{1, 4}), "{1,4}");
}
