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

#include <cmath>
#include <variant>

#include "buyback/harness.h"
#include "buyback/online.h"
#include "buyback/ratio.h"

using namespace buyback;

TEST_CASE("generators") {
  SUBCASE("geometric stream") {
    const Instance inst = generate(parse_generator("geometric:base=2,length=5", 1));
    CHECK(std::vector<double>(inst.values().begin(), inst.values().end()) ==
          std::vector<double>{1, 2, 4, 8, 16});
    CHECK(inst.oracle().kind() == MatroidKind::kUniform);
    CHECK(inst.oracle().as_uniform()->rank == 1);
  }
  SUBCASE("r-structured") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Instance inst = generate(parse_generator("rstructured:r=3,rank=2,n=4", seed));
      CHECK(is_r_structured(inst.values(), 3.0));
      CHECK(inst.oracle().as_uniform()->rank == 2);
    }
  }
  SUBCASE("random matroids satisfy the axioms") {
    for (const char* kind : {"uniform", "partition", "graphic", "explicit"}) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Instance inst = generate(
            parse_generator(std::string("random:kind=") + kind + ",n=6,values=uniform", seed));
        CHECK(to_string(inst.oracle().kind()) == kind);
        CHECK_FALSE(check_matroid_axioms(inst.oracle()).has_value());
        for (double v : inst.values()) {
          CHECK(v > 0.0);
          CHECK(v <= 1.0);
        }
      }
    }
  }
  SUBCASE("seeds") {
    const auto a = parse_generator("random:kind=graphic,n=30", 5);
    const auto b = parse_generator("random:kind=graphic,n=30,seed=5", 99);
    CHECK(a.seed == b.seed);
    const Instance x = generate(a);
    const Instance y = generate(b);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(x.value(i) == y.value(i));
  }
  SUBCASE("bad specs") {
    CHECK_THROWS_AS(parse_generator("geometric:base=2", 1), ConfigError);
    CHECK_THROWS_AS(parse_generator("geometric:base=x,length=3", 1), ConfigError);
    CHECK_THROWS_AS(parse_generator("fractal:n=3", 1), ConfigError);
    CHECK_THROWS_AS(parse_generator("random:kind=ring,n=3", 1), ConfigError);
    CHECK_THROWS_AS(generate(parse_generator("geometric:base=1,length=3", 1)), ConfigError);
    CHECK_THROWS_AS(generate(parse_generator("random:kind=explicit,n=30", 1)), ConfigError);
  }
}

TEST_CASE("deterministic greedy has zero standard error") {
  const Instance inst({1, 2, 3}, MatroidOracle::graphic({{0, 1}, {1, 2}, {0, 2}}));
  const RatioReport rep = estimate_expected_payoff(AlgorithmId::kGreedy, inst, 0.5, 5000, 3);
  CHECK(rep.mean_net == 4.5);
  CHECK(rep.stderr_net == 0.0);
  CHECK(rep.opt == 5.0);
  CHECK(rep.empirical_ratio == doctest::Approx(5.0 / 4.5));
  CHECK(rep.algorithm == "gma");
}

TEST_CASE("reports are reproducible") {
  const Instance inst = generate(parse_generator("random:kind=graphic,n=20", 4));
  const RatioReport a = estimate_expected_payoff(AlgorithmId::kRandomized, inst, 1.0, 3000, 77);
  const RatioReport b = estimate_expected_payoff(AlgorithmId::kRandomized, inst, 1.0, 3000, 77);
  CHECK(a.mean_net == b.mean_net);
  CHECK(a.stderr_net == b.stderr_net);
  const RatioReport c = estimate_expected_payoff(AlgorithmId::kRandomized, inst, 1.0, 3000, 78);
  CHECK(a.mean_net != c.mean_net);
}

TEST_CASE("randomized seller on its own geometric stream") {
  const double f = 1.0;
  const double r = optimal_r(f);
  const Instance inst = generate({GeometricStream{r, 12}, 0});
  const RatioReport rep =
      estimate_expected_payoff(AlgorithmId::kRandomized, inst, f, 100000, 2026);
  CHECK(rep.theoretical_bound == doctest::Approx(2.678346990016661));
  const double rel = rep.stderr_net / rep.mean_net;
  CHECK(rep.empirical_ratio <= competitive_ratio(f) * (1.0 + 3.0 * rel));
  // E[net]/OPT >= (r - 1 - f)/(r ln r) - eps
  CHECK(rep.mean_net / rep.opt >= (r - 1.0 - f) / (r * std::log(r)) - 3.0 * rel);
}

TEST_CASE("single element prefix ratio") {
  const Instance inst({1.0}, MatroidOracle::uniform(1, 1));
  const PrefixProfile p = worst_prefix_ratio(AlgorithmId::kGreedy, inst, 1.0, 10, 1);
  REQUIRE(p.points.size() == 1);
  CHECK(p.points[0].ratio == 1.0);
}

TEST_CASE("greedy is not competitive on fine geometric streams") {
  // With f equal to the step 0.05 every swap pays back exactly what it gains,
  // so the net stays at 1 while OPT grows.
  double previous = 0.0;
  for (std::size_t length : {10U, 40U, 160U}) {
    const Instance inst = generate({GeometricStream{1.05, length}, 0});
    const PrefixProfile p = worst_prefix_ratio(AlgorithmId::kGreedy, inst, 0.05, 1, 1);
    const double worst = p.worst_point().ratio;
    CHECK(worst == doctest::Approx(std::pow(1.05, static_cast<double>(length - 1))));
    CHECK(worst > previous);
    previous = worst;
  }
  const Instance inst = generate({GeometricStream{1.05, 10}, 0});
  CHECK(std::isinf(worst_prefix_ratio(AlgorithmId::kGreedy, inst, 1.0, 1, 1).worst_point().ratio));
}

TEST_CASE("randomized seller prefixes stay within the bound") {
  const Instance inst = generate({GeometricStream{1.05, 60}, 0});
  const PrefixProfile p = worst_prefix_ratio(AlgorithmId::kRandomized, inst, 1.0, 20000, 9);
  for (const PrefixPoint& pt : p.points) {
    CHECK(pt.ratio <= competitive_ratio(1.0) + 3.0 * pt.ratio_stderr);
  }
}

TEST_CASE("theoretical bounds and ratios") {
  CHECK(theoretical_bound(AlgorithmId::kGreedy, 0.0, std::nullopt) == 1.0);
  CHECK(std::isnan(theoretical_bound(AlgorithmId::kGreedy, 1.0, std::nullopt)));
  CHECK(theoretical_bound(AlgorithmId::kRandomized, 0.0, std::nullopt) == 1.0);
  CHECK(theoretical_bound(AlgorithmId::kRandomized, 1.0, 4.0) ==
        doctest::Approx(2.0 * std::log(4.0)));
  CHECK(safe_ratio(0.0, 0.0) == 1.0);
  CHECK(std::isinf(safe_ratio(1.0, 0.0)));
  CHECK(parse_algorithm("gma") == AlgorithmId::kGreedy);
  CHECK(parse_algorithm("randalg") == AlgorithmId::kRandomized);
  CHECK_THROWS_AS(parse_algorithm("oracle"), ConfigError);
}
