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

#ifndef BUYBACK_MATROID_H_
#define BUYBACK_MATROID_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace buyback {

// Elements are identified by their arrival index 0..n-1.
using Element = std::size_t;
using ElementSet = std::vector<Element>;

enum class MatroidKind { kUniform, kPartition, kGraphic, kExplicit };

std::string_view to_string(MatroidKind kind);

struct UniformMatroid {
  std::size_t rank = 0;
};

struct PartitionMatroid {
  std::vector<std::size_t> part_of;   // part id per element
  std::vector<std::size_t> capacity;  // capacity per part id
};

struct GraphicMatroid {
  using Edge = std::pair<std::size_t, std::size_t>;
  std::vector<Edge> edges;  // endpoints per element, as given
  std::size_t vertex_count = 0;
  std::vector<Edge> compact_edges;  // endpoints remapped to 0..vertex_count-1
};

struct ExplicitMatroid {
  std::vector<std::uint32_t> independent_masks;  // sorted, unique, contains 0
  std::vector<bool> lookup;                      // indexed by mask
};

// Query-only independence oracle. Immutable after construction, so a single
// instance can be shared by concurrent simulation workers.
class MatroidOracle {
 public:
  static constexpr std::size_t kMaxExplicitGroundSize = 20;

  static MatroidOracle uniform(std::size_t ground_size, std::size_t rank);
  static MatroidOracle partition(std::vector<std::size_t> part_of,
                                 std::vector<std::size_t> capacity);
  static MatroidOracle graphic(std::vector<GraphicMatroid::Edge> edges);
  // The family is taken as given (plus the empty set). Use
  // check_matroid_axioms() to validate user-supplied families.
  static MatroidOracle explicit_family(std::size_t ground_size,
                                       const std::vector<ElementSet>& independent_sets);
  // Enumerates every independent set of `base` into an explicit oracle.
  static MatroidOracle enumerate(const MatroidOracle& base);

  MatroidKind kind() const;
  std::size_t ground_size() const { return ground_size_; }

  // Throws std::out_of_range when an index is >= ground_size(). The set must
  // not contain duplicates.
  bool is_independent(std::span<const Element> set) const;

  const UniformMatroid* as_uniform() const { return std::get_if<UniformMatroid>(&rep_); }
  const PartitionMatroid* as_partition() const {
    return std::get_if<PartitionMatroid>(&rep_);
  }
  const GraphicMatroid* as_graphic() const { return std::get_if<GraphicMatroid>(&rep_); }
  const ExplicitMatroid* as_explicit() const { return std::get_if<ExplicitMatroid>(&rep_); }

 private:
  using Representation =
      std::variant<UniformMatroid, PartitionMatroid, GraphicMatroid, ExplicitMatroid>;

  MatroidOracle(std::size_t ground_size, Representation rep)
      : ground_size_(ground_size), rep_(std::move(rep)) {}

  std::size_t ground_size_ = 0;
  Representation rep_;
};

bool is_independent(const MatroidOracle& oracle, std::span<const Element> set);

// Exhaustive check of the empty-set, hereditary and exchange axioms over all
// subsets of the ground set. Returns a description of the first violation.
// Ground sets above kMaxExplicitGroundSize are rejected.
std::optional<std::string> check_matroid_axioms(const MatroidOracle& oracle);

// Arrival-ordered bid values together with the matroid on the same elements.
// Values must be finite and non-negative; zero-valued bids are never sold by
// any algorithm.
class Instance {
 public:
  Instance(std::vector<double> values, MatroidOracle oracle);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::span<const double> values() const { return values_; }
  double value(Element i) const { return values_[i]; }
  const MatroidOracle& oracle() const { return oracle_; }

 private:
  std::vector<double> values_;
  MatroidOracle oracle_;
};

struct Basis {
  ElementSet elements;  // ascending arrival index
  double value = 0.0;
};

// Offline optimum: greedy in decreasing value order (ties by arrival index)
// over the elements covered by `values`, which may be a prefix of the
// oracle's ground set.
Basis max_weight_basis(const MatroidOracle& oracle, std::span<const double> values);
Basis max_weight_basis(const Instance& instance);

// The cheapest j in `held` such that held + incoming - j is independent;
// ties go to the smallest arrival index. Requires held independent and
// held + incoming dependent. Uses at most |held| oracle queries.
std::optional<Element> find_swap_candidate(const MatroidOracle& oracle,
                                           std::span<const Element> held,
                                           Element incoming,
                                           std::span<const double> values);

}  // namespace buyback

#endif  // BUYBACK_MATROID_H_
