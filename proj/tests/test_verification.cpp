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
#include <memory>

#include "buyback/verification.h"

using namespace buyback;

namespace {

// Greedy with the swap test relaxed to <=.
class NonStrictGreedy final : public OnlineSeller {
 public:
  void reset(const MatroidOracle& oracle) override {
    oracle_ = &oracle;
    held_.clear();
    values_.assign(oracle.ground_size(), 0.0);
  }

  SellerStep offer(Element element, double value) override {
    values_[element] = value;
    ElementSet with = held_;
    with.push_back(element);
    if (oracle_->is_independent(with)) {
      held_.push_back(element);
      return {true, std::nullopt};
    }
    const auto j = find_swap_candidate(*oracle_, held_, element, values_);
    if (j && values_[*j] <= value) {
      held_.erase(std::find(held_.begin(), held_.end(), *j));
      held_.push_back(element);
      return {true, j};
    }
    return {false, std::nullopt};
  }

 private:
  const MatroidOracle* oracle_ = nullptr;
  ElementSet held_;
  std::vector<double> values_;
};

}  // namespace

TEST_CASE("all suites pass on the real implementation") {
  for (const SuiteResult& s : run_all_suites(VerifyOptions{})) {
    INFO(s.name << ": " << s.first_failure);
    CHECK(s.passed());
    CHECK(s.checks > 0);
  }
}

TEST_CASE("filter expectation deviation is tiny") {
  const SuiteResult s = verify_filter_expectation(VerifyOptions{});
  CHECK(s.checks == 50);
  CHECK(s.max_deviation < 1e-9);
}

TEST_CASE("non-strict greedy mutant is caught") {
  VerifyOptions options;
  options.greedy = [] { return std::make_unique<NonStrictGreedy>(); };
  const SuiteResult structured = verify_greedy_structured(options);
  const SuiteResult traces = verify_trace_invariants(options);
  CHECK((!structured.passed() || !traces.passed()));
  CHECK_FALSE(structured.passed());
}

TEST_CASE("exact filter expectation on a single item") {
  const Instance inst({2.0}, MatroidOracle::uniform(1, 1));
  const FilteredInstance fi(inst, {1.0});
  const double e = filter_expected_net_exact([] { return std::make_unique<GreedySeller>(); }, fi, 1.0);
  CHECK(e == doctest::Approx(1.0));
}
