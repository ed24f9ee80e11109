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
#include <cmath>
#include <memory>
#include <vector>

#include "buyback/matroid.h"
#include "buyback/online.h"
#include "buyback/random.h"
#include "buyback/ratio.h"

using namespace buyback;

namespace {

MatroidOracle triangle() { return MatroidOracle::graphic({{0, 1}, {1, 2}, {0, 2}}); }

// Checks the held set after every step of the wrapped seller.
class CheckedSeller final : public OnlineSeller {
 public:
  explicit CheckedSeller(std::unique_ptr<OnlineSeller> inner) : inner_(std::move(inner)) {}

  void reset(const MatroidOracle& oracle) override {
    oracle_ = &oracle;
    held_.clear();
    inner_->reset(oracle);
  }

  SellerStep offer(Element element, double value) override {
    const SellerStep step = inner_->offer(element, value);
    if (step.buyback) {
      auto it = std::find(held_.begin(), held_.end(), *step.buyback);
      REQUIRE(it != held_.end());
      held_.erase(it);
    }
    if (step.sell) held_.push_back(element);
    REQUIRE(oracle_->is_independent(held_));
    ++steps;
    return step;
  }

  std::size_t steps = 0;

 private:
  std::unique_ptr<OnlineSeller> inner_;
  const MatroidOracle* oracle_ = nullptr;
  ElementSet held_;
};

// A seller that always sells and never swaps, for rank-unconstrained oracles.
class AlwaysSell final : public OnlineSeller {
 public:
  void reset(const MatroidOracle&) override {}
  SellerStep offer(Element, double) override { return {true, std::nullopt}; }
};

Instance random_graphic(Rng& rng, std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) edges.emplace_back(uniform_int(rng, 0, 6), uniform_int(rng, 0, 6));
  std::vector<double> v(n);
  for (double& x : v) x = 1.0 + 99.0 * uniform01(rng);
  return Instance(v, MatroidOracle::graphic(edges));
}

}  // namespace

TEST_CASE("payoff ledger examples") {
  const std::vector<double> v{1, 4, 16};
  Trace t;
  t.final_set = {2};
  t.buyback_set = {0, 1};
  const PayoffLedger l = payoff(t, v, 1.0);
  CHECK(l.gross == 16);
  CHECK(l.penalty == 5);
  CHECK(l.net == 11);
  t.buyback_set.clear();
  CHECK(payoff(t, v, 1.0).net == 16);
  t.buyback_set = {0, 1};
  CHECK(payoff(t, v, 0.0).net == 16);
  CHECK_THROWS(payoff(t, v, -0.5));
}

TEST_CASE("greedy hand traces") {
  SUBCASE("increasing single item stream") {
    const Instance inst({1, 4, 16}, MatroidOracle::uniform(3, 1));
    const Trace t = run_gma(inst, 1.0);
    CHECK(t.final_set == ElementSet{2});
    CHECK(t.buyback_set == ElementSet{0, 1});
    CHECK(payoff(t, inst.values(), 1.0).net == 11);
    CHECK(t.events[1].decision == Decision::kSwap);
    CHECK(t.events[1].buyback == Element{0});
  }
  SUBCASE("triangle") {
    const Instance inst({1, 2, 3}, triangle());
    const Trace t = run_gma(inst, 0.5);
    CHECK(t.final_set == ElementSet{1, 2});
    CHECK(t.buyback_set == ElementSet{0});
    CHECK(payoff(t, inst.values(), 0.5).net == 4.5);
  }
  SUBCASE("empty instance") {
    const Instance inst({}, MatroidOracle::uniform(0, 0));
    const Trace t = run_gma(inst, 1.0);
    CHECK(t.events.empty());
    CHECK(payoff(t, inst.values(), 1.0).net == 0);
  }
  SUBCASE("equal value does not swap") {
    const Instance inst({3, 3}, MatroidOracle::uniform(2, 1));
    const Trace t = run_gma(inst, 1.0);
    CHECK(t.final_set == ElementSet{0});
    CHECK(t.events[1].decision == Decision::kReject);
  }
  SUBCASE("zero values are never sold") {
    const Instance inst({0, 2, 0}, MatroidOracle::uniform(3, 3));
    const Trace t = run_gma(inst, 1.0);
    CHECK(t.final_set == ElementSet{1});
  }
}

TEST_CASE("prefix nets follow the trace") {
  const Instance inst({1, 4, 16}, MatroidOracle::uniform(3, 1));
  const Trace t = run_gma(inst, 1.0);
  const auto nets = prefix_nets(t, inst.values(), 1.0);
  REQUIRE(nets.size() == 3);
  CHECK(nets[0] == 1);
  CHECK(nets[1] == 3);
  CHECK(nets[2] == 11);
}

TEST_CASE("validate_trace rejects tampered traces") {
  const Instance inst({1, 2, 3}, triangle());
  Trace t = run_gma(inst, 0.5);
  CHECK_FALSE(validate_trace(t, inst.oracle()).has_value());
  Trace bad = t;
  bad.events[2].buyback.reset();
  CHECK(validate_trace(bad, inst.oracle()).has_value());
  bad = t;
  bad.final_set = {0, 1, 2};
  CHECK(validate_trace(bad, inst.oracle()).has_value());
  bad = t;
  bad.events[2].decision = Decision::kSell;
  CHECK(validate_trace(bad, inst.oracle()).has_value());
}

TEST_CASE("step invariants hold for every algorithm") {
  Rng rng(99);
  for (int rep = 0; rep < 30; ++rep) {
    const Instance inst = random_graphic(rng, 12);
    CheckedSeller greedy(std::make_unique<GreedySeller>());
    const Trace tg = run_online(greedy, inst);
    CHECK(greedy.steps == inst.size());
    CHECK_FALSE(validate_trace(tg, inst.oracle()).has_value());

    Rng coin_rng(rep);
    CheckedSeller checked(std::make_unique<RandomizedSeller>(4.0, coin_rng));
    const Trace tr = run_online(checked, inst);
    CHECK_FALSE(validate_trace(tr, inst.oracle()).has_value());
  }
}

TEST_CASE("filter with probability-one coins equals the inner run") {
  Rng rng(3);
  const Instance inst = random_graphic(rng, 10);
  const FilteredInstance same(inst, std::vector<double>(inst.values().begin(), inst.values().end()));
  const Trace outer = run_filter(std::make_unique<GreedySeller>(), same, 1.0, rng);
  const Trace inner = run_gma(inst, 1.0);
  CHECK(outer == inner);
}

TEST_CASE("filter on a single item") {
  const Instance inst({2.0}, MatroidOracle::uniform(1, 1));
  const FilteredInstance half(inst, {1.0});
  const Trace sold = run_filter_with_coins(std::make_unique<AlwaysSell>(), half, 1.0, {true});
  const Trace kept = run_filter_with_coins(std::make_unique<AlwaysSell>(), half, 1.0, {false});
  const double expected =
      0.5 * payoff(sold, inst.values(), 1.0).net + 0.5 * payoff(kept, inst.values(), 1.0).net;
  CHECK(expected == 1.0);
}

TEST_CASE("filter drops buybacks of unsold inner elements") {
  // Inner greedy holds 0 then swaps it for 1. With coin 0 = 0 the outer seller
  // never sold 0 and must not buy it back; with coin 1 = 0 the outer seller
  // buys 0 back without selling 1.
  const Instance inst({1.0, 2.0}, MatroidOracle::uniform(2, 1));
  const FilteredInstance fi(inst, {1.0, 2.0});
  const Trace a = run_filter_with_coins(std::make_unique<GreedySeller>(), fi, 1.0, {false, true});
  CHECK(a.final_set == ElementSet{1});
  CHECK(a.buyback_set.empty());
  const Trace b = run_filter_with_coins(std::make_unique<GreedySeller>(), fi, 1.0, {true, false});
  CHECK(b.final_set.empty());
  CHECK(b.buyback_set == ElementSet{0});
  CHECK(b.events[1].decision == Decision::kReject);
  CHECK(b.events[1].buyback == Element{0});
  CHECK_FALSE(validate_trace(b, inst.oracle()).has_value());
}

TEST_CASE("filtered instance bounds") {
  const Instance inst({1.0, 2.0}, MatroidOracle::uniform(2, 1));
  CHECK_THROWS(FilteredInstance(inst, {1.5, 2.0}));
  CHECK_THROWS(FilteredInstance(inst, {0.0, 2.0}));
  CHECK_THROWS(FilteredInstance(inst, {1.0}));
}

TEST_CASE("round_value examples") {
  CHECK(round_value(8.0, {2.0, 0.5}) == doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-14));
  CHECK(round_value(8.0, {2.0, 0.0}) == 8.0);
  CHECK(round_value(8.0, {2.0, 1.0}) == 8.0);
  CHECK(round_value(1.0, {3.0, 0.0}) == 1.0);
  CHECK_THROWS_AS(round_value(0.0, {2.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(round_value(1.0, {1.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(round_value(1.0, {2.0, 1.5}), std::domain_error);
}

TEST_CASE("round_value stays in (v/r, v] on a lattice point") {
  Rng rng(8);
  for (int i = 0; i < 20000; ++i) {
    const double r = 1.01 + 9.0 * uniform01(rng);
    const double u = uniform01(rng);
    const double v = std::exp(40.0 * uniform01(rng) - 20.0);
    const double w = round_value(v, {r, u});
    REQUIRE(w <= v);
    REQUIRE(w > v / r);
    const double z = std::log(w) / std::log(r) - u;
    REQUIRE(std::abs(z - std::round(z)) < 1e-8);
  }
}

TEST_CASE("randomized rounding is monotone and r-structured") {
  const std::vector<double> v{0.3, 1.0, 2.2, 7.9, 8.0, 55.0};
  for (double u : {0.0, 0.25, 0.77, 1.0}) {
    std::vector<double> w;
    for (double x : v) w.push_back(round_value(x, {3.0, u}));
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i] >= w[i - 1]);
    CHECK(is_r_structured(w, 3.0));
  }
  CHECK_FALSE(is_r_structured(std::vector<double>{1.0, 2.5}, 2.0));
}

TEST_CASE("randomized seller on a single element sells with probability w/v") {
  const Instance inst({8.0}, MatroidOracle::uniform(1, 1));
  Rng rng(2024);
  const int trials = 200000;
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    total += payoff(run_randalg(inst, 1.0, 2.0 + 1e-12, rng), inst.values(), 1.0).net;
  }
  const double mean = total / trials;
  const double expected = 8.0 * (1.0 / (2.0 * std::log(2.0)));
  // net is 8 with probability p ~ 0.72, else 0
  const double se = 8.0 * std::sqrt(0.7213 * 0.2787 / trials);
  CHECK(std::abs(mean - expected) < 4.0 * se);
}

TEST_CASE("rounding base resolution") {
  CHECK_FALSE(resolve_rounding_base(0.0, std::nullopt).has_value());
  CHECK(*resolve_rounding_base(1.0, std::nullopt) == doctest::Approx(5.356693980033321));
  CHECK(*resolve_rounding_base(1.0, 3.0) == 3.0);
  CHECK_THROWS_AS(resolve_rounding_base(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(resolve_rounding_base(-1.0, std::nullopt), std::invalid_argument);
}

TEST_CASE("f = 0 randomized seller equals the prophet") {
  Rng rng(17);
  for (int rep = 0; rep < 20; ++rep) {
    const Instance inst = random_graphic(rng, 12);
    const Trace t = run_randalg(inst, 0.0, std::nullopt, rng);
    CHECK(payoff(t, inst.values(), 0.0).net == doctest::Approx(max_weight_basis(inst).value));
  }
}
