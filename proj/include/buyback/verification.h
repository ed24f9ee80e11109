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

#ifndef BUYBACK_VERIFICATION_H_
#define BUYBACK_VERIFICATION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "buyback/online.h"

namespace buyback {

// Invariant suites run by `buyback verify`. Each suite counts individual
// checks and failures and keeps the first failure message.

using SellerFactory = std::function<std::unique_ptr<OnlineSeller>()>;

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double max_deviation = 0.0;  // suites comparing two quantities

  bool passed() const { return failures == 0; }
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  // Builds the greedy seller exercised by the greedy-specific suites. Tests
  // substitute mutants here.
  SellerFactory greedy = [] { return std::make_unique<GreedySeller>(); };
  // Sample count for the rounding distribution suite.
  std::size_t rounding_samples = 200000;
};

// Expected outer net payoff of Filter(inner) on v, by enumerating all coin
// vectors weighted by their probability. Requires a deterministic inner
// seller and at most 20 elements.
double filter_expected_net_exact(const SellerFactory& inner, const FilteredInstance& filtered,
                                 double f);

// Filter expectation equality: 50 random explicit-oracle instances with
// n <= 10 and random 0 < w <= v.
SuiteResult verify_filter_expectation(const VerifyOptions& options);

// Greedy on r-structured instances (r = 4, f = 1, ranks up to 10): net >=
// (1 - f/(r-1)) OPT and total buyback <= f/(r-1) val(final set).
SuiteResult verify_greedy_structured(const VerifyOptions& options);

SuiteResult verify_matroid_oracles(const VerifyOptions& options);
SuiteResult verify_trace_invariants(const VerifyOptions& options);
SuiteResult verify_rounding_distribution(const VerifyOptions& options);
SuiteResult verify_lambert(const VerifyOptions& options);
SuiteResult verify_ratio_consistency(const VerifyOptions& options);
SuiteResult verify_mark_structure(const VerifyOptions& options);
SuiteResult verify_lower_bound_sweep(const VerifyOptions& options);

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options);

}  // namespace buyback

#endif  // BUYBACK_VERIFICATION_H_
