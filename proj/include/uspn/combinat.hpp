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

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace uspn {

// Sorted list of distinct indices.
using IndexSet = std::vector<int>;

// Validates and sorts; throws DomainError on duplicates.
IndexSet make_index_set(std::vector<int> elements);
IndexSet range_set(int first, int last);  // {first, ..., last}
IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool disjoint(const IndexSet& a, const IndexSet& b);
std::string to_string(const IndexSet& s);

using Matching = std::vector<std::pair<int, int>>;

// Block of size one (second == -1) or two.
struct Block {
  int first;
  int second = -1;
  bool is_pair() const noexcept { return second >= 0; }
  bool operator==(const Block&) const = default;
};
using PairSingletonPartition = std::vector<Block>;

struct TwoWaySplit {
  IndexSet q;
  IndexSet m;
};

struct FourWaySplit {
  IndexSet i1, i1c, i2, i2c;
};

// Subsets ordered by size, then lexicographically.
template <class F>
void for_each_subset(const IndexSet& s, F&& visit);

template <class F>
void for_each_perfect_matching(const IndexSet& s, F&& visit);

template <class F>
void for_each_pair_singleton_partition(const IndexSet& s, F&& visit);

template <class F>
void for_each_four_way_split(const IndexSet& s, F&& visit);

std::vector<IndexSet> subsets(const IndexSet& s);
std::vector<IndexSet> even_subsets(const IndexSet& s);
std::vector<IndexSet> proper_even_subsets(const IndexSet& s);
std::vector<IndexSet> proper_subsets(const IndexSet& s);
std::vector<TwoWaySplit> two_way_splits(const IndexSet& s);
// Throws DomainError for odd |s|.
std::vector<Matching> perfect_matchings(const IndexSet& s);
std::vector<PairSingletonPartition> pair_singleton_partitions(const IndexSet& s);
// Ordered splits of s into (I1, I1c, I2, I2c) with I1c and I2c nonempty.
std::vector<FourWaySplit> four_way_splits_with_nonempty(const IndexSet& s);

// ---------------------------------------------------------------------------

namespace detail {

template <class F>
void subsets_of_size(const IndexSet& s, std::size_t k, std::size_t start, IndexSet& cur,
                     F& visit) {
  if (cur.size() == k) {
    visit(static_cast<const IndexSet&>(cur));
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= s.size(); ++i) {
    cur.push_back(s[i]);
    subsets_of_size(s, k, i + 1, cur, visit);
    cur.pop_back();
  }
}

template <class F>
void matchings(std::vector<int>& rest, Matching& cur, F& visit) {
  if (rest.empty()) {
    visit(static_cast<const Matching&>(cur));
    return;
  }
  const int a = rest.front();
  for (std::size_t i = 1; i < rest.size(); ++i) {
    const int b = rest[i];
    std::vector<int> next;
    next.reserve(rest.size() - 2);
    for (std::size_t j = 1; j < rest.size(); ++j)
      if (j != i) next.push_back(rest[j]);
    cur.emplace_back(a, b);
    matchings(next, cur, visit);
    cur.pop_back();
  }
}

template <class F>
void partitions(std::vector<int>& rest, PairSingletonPartition& cur, F& visit) {
  if (rest.empty()) {
    visit(static_cast<const PairSingletonPartition&>(cur));
    return;
  }
  const int a = rest.front();
  std::vector<int> tail(rest.begin() + 1, rest.end());
  cur.push_back(Block{a});
  partitions(tail, cur, visit);
  cur.pop_back();
  for (std::size_t i = 1; i < rest.size(); ++i) {
    std::vector<int> next;
    next.reserve(rest.size() - 2);
    for (std::size_t j = 1; j < rest.size(); ++j)
      if (j != i) next.push_back(rest[j]);
    cur.push_back(Block{a, rest[i]});
    partitions(next, cur, visit);
    cur.pop_back();
  }
}

}  // namespace detail

template <class F>
void for_each_subset(const IndexSet& s, F&& visit) {
  IndexSet cur;
  cur.reserve(s.size());
  for (std::size_t k = 0; k <= s.size(); ++k) detail::subsets_of_size(s, k, 0, cur, visit);
}

template <class F>
void for_each_perfect_matching(const IndexSet& s, F&& visit) {
  if (s.size() % 2 != 0) return;
  std::vector<int> rest(s.begin(), s.end());
  Matching cur;
  detail::matchings(rest, cur, visit);
}

template <class F>
void for_each_pair_singleton_partition(const IndexSet& s, F&& visit) {
  std::vector<int> rest(s.begin(), s.end());
  PairSingletonPartition cur;
  detail::partitions(rest, cur, visit);
}

template <class F>
void for_each_four_way_split(const IndexSet& s, F&& visit) {
  const std::size_t m = s.size();
  if (m < 2) return;
  std::vector<int> label(m, 0);
  FourWaySplit split;
  for (;;) {
    std::array<IndexSet*, 4> parts{&split.i1, &split.i1c, &split.i2, &split.i2c};
    for (auto* p : parts) p->clear();
    for (std::size_t i = 0; i < m; ++i) parts[label[i]]->push_back(s[i]);
    if (!split.i1c.empty() && !split.i2c.empty()) visit(static_cast<const FourWaySplit&>(split));
    std::size_t pos = m;
    while (pos > 0) {
      --pos;
      if (++label[pos] < 4) break;
      label[pos] = 0;
      if (pos == 0) return;
    }
  }
}

}  // namespace uspn
