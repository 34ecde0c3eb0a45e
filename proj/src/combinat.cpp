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

#include "uspn/combinat.hpp"

#include <algorithm>

#include "uspn/errors.hpp"

namespace uspn {

IndexSet make_index_set(std::vector<int> elements) {
  std::sort(elements.begin(), elements.end());
  if (std::adjacent_find(elements.begin(), elements.end()) != elements.end())
    throw DomainError("index set has duplicate elements");
  return elements;
}

IndexSet range_set(int first, int last) {
  IndexSet s;
  for (int i = first; i <= last; ++i) s.push_back(i);
  return s;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool disjoint(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out.empty();
}

std::string to_string(const IndexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

std::vector<IndexSet> subsets(const IndexSet& s) {
  std::vector<IndexSet> out;
  for_each_subset(s, [&](const IndexSet& t) { out.push_back(t); });
  return out;
}

std::vector<IndexSet> even_subsets(const IndexSet& s) {
  std::vector<IndexSet> out;
  for_each_subset(s, [&](const IndexSet& t) {
    if (t.size() % 2 == 0) out.push_back(t);
  });
  return out;
}

std::vector<IndexSet> proper_even_subsets(const IndexSet& s) {
  std::vector<IndexSet> out;
  for_each_subset(s, [&](const IndexSet& t) {
    if (t.size() % 2 == 0 && t.size() < s.size()) out.push_back(t);
  });
  return out;
}

std::vector<IndexSet> proper_subsets(const IndexSet& s) {
  std::vector<IndexSet> out;
  for_each_subset(s, [&](const IndexSet& t) {
    if (t.size() < s.size()) out.push_back(t);
  });
  return out;
}

std::vector<TwoWaySplit> two_way_splits(const IndexSet& s) {
  std::vector<TwoWaySplit> out;
  auto all = subsets(s);
  for (auto it = all.rbegin(); it != all.rend(); ++it) out.push_back({*it, set_difference(s, *it)});
  return out;
}

std::vector<Matching> perfect_matchings(const IndexSet& s) {
  if (s.size() % 2 != 0) throw DomainError("perfect matchings need an even-size set");
  std::vector<Matching> out;
  for_each_perfect_matching(s, [&](const Matching& m) { out.push_back(m); });
  return out;
}

std::vector<PairSingletonPartition> pair_singleton_partitions(const IndexSet& s) {
  std::vector<PairSingletonPartition> out;
  for_each_pair_singleton_partition(s, [&](const PairSingletonPartition& p) { out.push_back(p); });
  return out;
}

std::vector<FourWaySplit> four_way_splits_with_nonempty(const IndexSet& s) {
  std::vector<FourWaySplit> out;
  for_each_four_way_split(s, [&](const FourWaySplit& f) { out.push_back(f); });
  return out;
}

}  // namespace uspn
