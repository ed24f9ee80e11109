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

#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "buyback/matroid.h"
#include "buyback/random.h"

using namespace buyback;

namespace {

MatroidOracle triangle() { return MatroidOracle::graphic({{0, 1}, {1, 2}, {0, 2}}); }

ElementSet from_mask(std::uint32_t mask, std::size_t n) {
  ElementSet s;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask >> i & 1U) s.push_back(i);
  }
  return s;
}

}  // namespace

TEST_CASE("uniform oracle respects its rank") {
  const auto m = MatroidOracle::uniform(3, 2);
  CHECK(m.is_independent(ElementSet{0, 1}));
  CHECK_FALSE(m.is_independent(ElementSet{0, 1, 2}));
  CHECK(m.is_independent(ElementSet{}));
  CHECK_THROWS_AS(m.is_independent(ElementSet{3}), std::out_of_range);
}

TEST_CASE("graphic triangle") {
  const auto m = triangle();
  CHECK_FALSE(m.is_independent(ElementSet{0, 1, 2}));
  CHECK(m.is_independent(ElementSet{0, 1}));
  CHECK(m.is_independent(ElementSet{}));
  CHECK_FALSE(check_matroid_axioms(m).has_value());
}

TEST_CASE("graphic self-loop is dependent") {
  const auto m = MatroidOracle::graphic({{4, 4}, {4, 7}});
  CHECK_FALSE(m.is_independent(ElementSet{0}));
  CHECK(m.is_independent(ElementSet{1}));
}

TEST_CASE("partition oracle") {
  const auto m = MatroidOracle::partition({0, 0, 1, 1, 1}, {1, 2});
  CHECK(m.is_independent(ElementSet{0, 2, 3}));
  CHECK_FALSE(m.is_independent(ElementSet{0, 1}));
  CHECK_FALSE(m.is_independent(ElementSet{2, 3, 4}));
  CHECK_THROWS(MatroidOracle::partition({0, 3}, {1, 1}));
}

TEST_CASE("axiom checker flags non-matroids") {
  // {0,1} without {1} breaks heredity.
  CHECK(check_matroid_axioms(MatroidOracle::explicit_family(2, {{}, {0}, {0, 1}})).has_value());
  // {2} cannot be extended from {0,1}.
  CHECK(check_matroid_axioms(MatroidOracle::explicit_family(3, {{}, {0}, {1}, {2}, {0, 1}}))
            .has_value());
  CHECK_FALSE(check_matroid_axioms(MatroidOracle::explicit_family(3, {{}, {0}, {1}, {2}, {0, 1},
                                                                       {0, 2}}))
                  .has_value());
  CHECK_THROWS(MatroidOracle::explicit_family(21, {{}}));
}

TEST_CASE("enumerated oracle agrees with its base") {
  Rng rng(5);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (int i = 0; i < 9; ++i) edges.emplace_back(uniform_int(rng, 0, 4), uniform_int(rng, 0, 4));
  const auto base = MatroidOracle::graphic(edges);
  const auto table = MatroidOracle::enumerate(base);
  CHECK(table.kind() == MatroidKind::kExplicit);
  for (std::uint32_t mask = 0; mask < (1U << 9); ++mask) {
    const ElementSet s = from_mask(mask, 9);
    CHECK(table.is_independent(s) == base.is_independent(s));
  }
}

TEST_CASE("max_weight_basis examples") {
  SUBCASE("uniform rank 1") {
    const std::vector<double> v{1, 4, 16};
    const Basis b = max_weight_basis(MatroidOracle::uniform(3, 1), v);
    CHECK(b.elements == ElementSet{2});
    CHECK(b.value == 16);
  }
  SUBCASE("triangle") {
    const std::vector<double> v{3, 2, 1};
    const Basis b = max_weight_basis(triangle(), v);
    CHECK(b.elements == ElementSet{0, 1});
    CHECK(b.value == 5);
  }
  SUBCASE("explicit size <= 2") {
    const auto m = MatroidOracle::explicit_family(3, {{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}});
    const std::vector<double> v{5, 5, 1};
    CHECK(max_weight_basis(m, v).value == 10);
  }
  SUBCASE("prefix of the values") {
    const std::vector<double> v{1, 4};
    CHECK(max_weight_basis(MatroidOracle::uniform(3, 1), v).value == 4);
  }
}

TEST_CASE("max_weight_basis matches brute force on small explicit oracles") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 4 + rep % 9;  // up to 12
    const auto base = MatroidOracle::uniform(n, 1 + rep % 4);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i) {
      edges.emplace_back(uniform_int(rng, 0, n / 2), uniform_int(rng, 0, n / 2));
    }
    const auto m = MatroidOracle::enumerate(rep % 2 ? base : MatroidOracle::graphic(edges));
    for (int w = 0; w < 100; ++w) {
      std::vector<double> v(n);
      for (double& x : v) x = uniform01(rng);
      double best = 0.0;
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        const ElementSet s = from_mask(mask, n);
        if (!m.is_independent(s)) continue;
        double total = 0.0;
        for (Element e : s) total += v[e];
        best = std::max(best, total);
      }
      REQUIRE(max_weight_basis(m, v).value == doctest::Approx(best).epsilon(1e-12));
    }
  }
}

TEST_CASE("find_swap_candidate examples") {
  SUBCASE("triangle picks the cheapest circuit element") {
    const std::vector<double> v{1, 2, 3};
    const ElementSet held{0, 1};
    CHECK(find_swap_candidate(triangle(), held, 2, v) == Element{0});
  }
  SUBCASE("uniform rank 1") {
    const std::vector<double> v{1, 2};
    const ElementSet held{0};
    CHECK(find_swap_candidate(MatroidOracle::uniform(2, 1), held, 1, v) == Element{0});
  }
  SUBCASE("feasibility filters before value") {
    // Only {1,2} is independent among the swaps, so 0 must go even though it
    // is the most valuable.
    const auto m = MatroidOracle::explicit_family(3, {{}, {0}, {1}, {2}, {0, 1}, {1, 2}});
    const ElementSet held{0, 1};
    const std::vector<double> v{100, 1, 5};
    CHECK(find_swap_candidate(m, held, 2, v) == Element{0});
  }
  SUBCASE("loop has no candidate") {
    const auto m = MatroidOracle::graphic({{0, 1}, {2, 2}});
    const std::vector<double> v{1, 5};
    const ElementSet held{0};
    CHECK_FALSE(find_swap_candidate(m, held, 1, v).has_value());
  }
}

TEST_CASE("instance validation") {
  CHECK_THROWS(Instance({1.0, 2.0}, MatroidOracle::uniform(3, 1)));
  CHECK_THROWS(Instance({1.0, -2.0}, MatroidOracle::uniform(2, 1)));
  CHECK_THROWS(Instance({1.0, std::nan("")}, MatroidOracle::uniform(2, 1)));
  CHECK_NOTHROW(Instance({0.0, 2.0}, MatroidOracle::uniform(2, 1)));
}
