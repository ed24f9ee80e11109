// Copyright 2026 The Authors.
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

#include "buyback/matroid.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace buyback {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // False when a and b were already connected.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::uint32_t to_mask(std::span<const Element> set) {
  std::uint32_t mask = 0;
  for (Element e : set) mask |= std::uint32_t{1} << e;
  return mask;
}

void check_indices(std::span<const Element> set, std::size_t ground_size) {
  for (Element e : set) {
    if (e >= ground_size) {
      throw std::out_of_range(
          fmt::format("element {} out of range for ground set of size {}", e, ground_size));
    }
  }
}

}  // namespace

std::string_view to_string(MatroidKind kind) {
  switch (kind) {
    case MatroidKind::kUniform:
      return "uniform";
    case MatroidKind::kPartition:
      return "partition";
    case MatroidKind::kGraphic:
      return "graphic";
    case MatroidKind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

MatroidOracle MatroidOracle::uniform(std::size_t ground_size, std::size_t rank) {
  return MatroidOracle(ground_size, UniformMatroid{rank});
}

MatroidOracle MatroidOracle::partition(std::vector<std::size_t> part_of,
                                       std::vector<std::size_t> capacity) {
  for (std::size_t i = 0; i < part_of.size(); ++i) {
    if (part_of[i] >= capacity.size()) {
      throw std::invalid_argument(fmt::format(
          "element {} assigned to part {} but only {} capacities given", i, part_of[i],
          capacity.size()));
    }
  }
  const std::size_t n = part_of.size();
  return MatroidOracle(n, PartitionMatroid{std::move(part_of), std::move(capacity)});
}

MatroidOracle MatroidOracle::graphic(std::vector<GraphicMatroid::Edge> edges) {
  GraphicMatroid rep;
  std::map<std::size_t, std::size_t> ids;
  auto id_of = [&](std::size_t v) {
    auto [it, inserted] = ids.try_emplace(v, ids.size());
    return it->second;
  };
  rep.compact_edges.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    const std::size_t ca = id_of(a);
    const std::size_t cb = id_of(b);
    rep.compact_edges.emplace_back(ca, cb);
  }
  rep.vertex_count = ids.size();
  const std::size_t n = edges.size();
  rep.edges = std::move(edges);
  return MatroidOracle(n, std::move(rep));
}

MatroidOracle MatroidOracle::explicit_family(std::size_t ground_size,
                                             const std::vector<ElementSet>& independent_sets) {
  if (ground_size > kMaxExplicitGroundSize) {
    throw std::invalid_argument(fmt::format("explicit matroids support at most {} elements, got {}",
                                            kMaxExplicitGroundSize, ground_size));
  }
  ExplicitMatroid rep;
  rep.lookup.assign(std::size_t{1} << ground_size, false);
  rep.lookup[0] = true;
  for (const ElementSet& set : independent_sets) {
    check_indices(set, ground_size);
    rep.lookup[to_mask(set)] = true;
  }
  for (std::size_t mask = 0; mask < rep.lookup.size(); ++mask) {
    if (rep.lookup[mask]) rep.independent_masks.push_back(static_cast<std::uint32_t>(mask));
  }
  return MatroidOracle(ground_size, std::move(rep));
}

MatroidOracle MatroidOracle::enumerate(const MatroidOracle& base) {
  const std::size_t n = base.ground_size();
  if (n > kMaxExplicitGroundSize) {
    throw std::invalid_argument("ground set too large to enumerate");
  }
  std::vector<ElementSet> family;
  ElementSet set;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    set.clear();
    for (std::size_t e = 0; e < n; ++e) {
      if (mask & (std::uint32_t{1} << e)) set.push_back(e);
    }
    if (base.is_independent(set)) family.push_back(set);
  }
  return explicit_family(n, family);
}

MatroidKind MatroidOracle::kind() const {
  return static_cast<MatroidKind>(rep_.index());
}

bool MatroidOracle::is_independent(std::span<const Element> set) const {
  check_indices(set, ground_size_);
  if (set.empty()) return true;

  if (const auto* u = as_uniform()) return set.size() <= u->rank;

  if (const auto* p = as_partition()) {
    std::vector<std::size_t> used(p->capacity.size(), 0);
    for (Element e : set) {
      const std::size_t part = p->part_of[e];
      if (++used[part] > p->capacity[part]) return false;
    }
    return true;
  }

  if (const auto* g = as_graphic()) {
    // Independent iff the chosen edges form a forest.
    UnionFind components(g->vertex_count);
    for (Element e : set) {
      const auto& [a, b] = g->compact_edges[e];
      if (!components.unite(a, b)) return false;
    }
    return true;
  }

  const auto& x = std::get<ExplicitMatroid>(rep_);
  return x.lookup[to_mask(set)];
}

bool is_independent(const MatroidOracle& oracle, std::span<const Element> set) {
  return oracle.is_independent(set);
}

std::optional<std::string> check_matroid_axioms(const MatroidOracle& oracle) {
  const std::size_t n = oracle.ground_size();
  if (n > MatroidOracle::kMaxExplicitGroundSize) {
    return fmt::format("ground set of size {} too large for exhaustive check", n);
  }
  const std::uint32_t full = std::uint32_t{1} << n;
  std::vector<bool> independent(full);
  std::vector<std::uint32_t> family;
  ElementSet set;
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    set.clear();
    for (std::size_t e = 0; e < n; ++e) {
      if (mask & (std::uint32_t{1} << e)) set.push_back(e);
    }
    independent[mask] = oracle.is_independent(set);
    if (independent[mask]) family.push_back(mask);
  }
  if (!independent[0]) return "empty set is not independent";

  for (std::uint32_t mask : family) {
    for (std::size_t e = 0; e < n; ++e) {
      const std::uint32_t bit = std::uint32_t{1} << e;
      if ((mask & bit) && !independent[mask & ~bit]) {
        return fmt::format("hereditary: set {:#x} independent but {:#x} is not", mask,
                           mask & ~bit);
      }
    }
  }

  // Given heredity, exchange reduces to |T| = |S| + 1.
  for (std::uint32_t s : family) {
    for (std::uint32_t t : family) {
      if (std::popcount(t) != std::popcount(s) + 1) continue;
      const std::uint32_t candidates = t & ~s;
      bool augmentable = false;
      for (std::size_t e = 0; e < n && !augmentable; ++e) {
        const std::uint32_t bit = std::uint32_t{1} << e;
        augmentable = (candidates & bit) && independent[s | bit];
      }
      if (!augmentable) {
        return fmt::format("exchange: no element of {:#x} augments {:#x}", t, s);
      }
    }
  }
  return std::nullopt;
}

Instance::Instance(std::vector<double> values, MatroidOracle oracle)
    : values_(std::move(values)), oracle_(std::move(oracle)) {
  if (values_.size() != oracle_.ground_size()) {
    throw std::invalid_argument(fmt::format("instance has {} values but matroid ground set has {}",
                                            values_.size(), oracle_.ground_size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
      throw std::invalid_argument(
          fmt::format("value {} at element {} must be finite and non-negative", values_[i], i));
    }
  }
}

Basis max_weight_basis(const MatroidOracle& oracle, std::span<const double> values) {
  if (values.size() > oracle.ground_size()) {
    throw std::invalid_argument("more values than matroid elements");
  }
  std::vector<Element> order(values.size());
  std::iota(order.begin(), order.end(), Element{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Element a, Element b) { return values[a] > values[b]; });

  Basis basis;
  for (Element e : order) {
    if (!(values[e] > 0.0)) break;
    basis.elements.push_back(e);
    if (!oracle.is_independent(basis.elements)) basis.elements.pop_back();
  }
  std::sort(basis.elements.begin(), basis.elements.end());
  for (Element e : basis.elements) basis.value += values[e];
  return basis;
}

Basis max_weight_basis(const Instance& instance) {
  return max_weight_basis(instance.oracle(), instance.values());
}

std::optional<Element> find_swap_candidate(const MatroidOracle& oracle,
                                           std::span<const Element> held, Element incoming,
                                           std::span<const double> values) {
  std::optional<Element> best;
  ElementSet candidate;
  candidate.reserve(held.size());
  for (Element j : held) {
    if (best && (values[j] > values[*best] || (values[j] == values[*best] && j > *best))) {
      continue;
    }
    candidate.clear();
    for (Element e : held) {
      if (e != j) candidate.push_back(e);
    }
    candidate.push_back(incoming);
    if (oracle.is_independent(candidate)) best = j;
  }
  return best;
}

}  // namespace buyback
