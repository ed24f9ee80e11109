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

#include "buyback/verification.h"

#include <cmath>
#include <numbers>
#include <queue>

#include <fmt/format.h>

#include "buyback/harness.h"
#include "buyback/lower_bound.h"
#include "buyback/numeric.h"
#include "buyback/random.h"
#include "buyback/ratio.h"

namespace buyback {
namespace {

class Checker {
 public:
  explicit Checker(std::string name) { result_.name = std::move(name); }

  void expect(bool ok, const std::function<std::string()>& message) {
    ++result_.checks;
    if (ok) return;
    if (result_.failures++ == 0) result_.first_failure = message();
  }

  void deviation(double d) { result_.max_deviation = std::max(result_.max_deviation, d); }

  SuiteResult done() { return std::move(result_); }

 private:
  SuiteResult result_;
};

// Forest test by breadth-first search over the chosen edges: a set of edges
// is acyclic iff |edges| = |touched vertices| - |components|.
bool is_forest_bfs(const GraphicMatroid& g, const ElementSet& set) {
  std::vector<std::vector<std::size_t>> adjacency(g.vertex_count);
  std::vector<char> touched(g.vertex_count, 0);
  for (Element e : set) {
    const auto [a, b] = g.compact_edges[e];
    if (a == b) return false;
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
    touched[a] = touched[b] = 1;
  }
  std::size_t vertices = 0;
  std::size_t components = 0;
  std::vector<char> seen(g.vertex_count, 0);
  for (std::size_t s = 0; s < g.vertex_count; ++s) {
    if (!touched[s]) continue;
    ++vertices;
    if (seen[s]) continue;
    ++components;
    std::queue<std::size_t> frontier;
    frontier.push(s);
    seen[s] = 1;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w : adjacency[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          frontier.push(w);
        }
      }
    }
  }
  return set.size() == vertices - components;
}

ElementSet from_mask(std::uint32_t mask, std::size_t n) {
  ElementSet set;
  for (std::size_t e = 0; e < n; ++e) {
    if (mask & (std::uint32_t{1} << e)) set.push_back(e);
  }
  return set;
}

double brute_force_opt(const MatroidOracle& oracle, std::span<const double> values) {
  double best = 0.0;
  const std::size_t n = oracle.ground_size();
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    const ElementSet set = from_mask(mask, n);
    if (!oracle.is_independent(set)) continue;
    double total = 0.0;
    for (Element e : set) total += values[e];
    best = std::max(best, total);
  }
  return best;
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

double filter_expected_net_exact(const SellerFactory& inner, const FilteredInstance& filtered,
                                 double f) {
  const Instance& base = filtered.base();
  const std::size_t n = base.size();
  if (n > 20) throw std::invalid_argument("exact filter enumeration supports n <= 20");
  std::vector<double> heads(n, 1.0);
  for (Element i = 0; i < n; ++i) {
    if (base.value(i) > 0.0) heads[i] = filtered.filtered_values()[i] / base.value(i);
  }

  CompensatedSum expectation;
  std::vector<bool> coins(n);
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    double probability = 1.0;
    for (Element i = 0; i < n; ++i) {
      coins[i] = (mask >> i) & 1u;
      probability *= coins[i] ? heads[i] : 1.0 - heads[i];
    }
    if (probability == 0.0) continue;
    const Trace trace = run_filter_with_coins(inner(), filtered, f, coins);
    expectation.add(probability * payoff(trace, base.values(), f).net);
  }
  return expectation.value();
}

SuiteResult verify_matroid_oracles(const VerifyOptions& options) {
  Checker check("matroid_oracles");
  Rng rng(derive_seed(options.seed, 1));

  for (int t = 0; t < 30; ++t) {
    const auto kind = static_cast<MatroidKind>(t % 3);
    const std::size_t n = uniform_int(rng, 1, 8);
    const Instance inst =
        generate({RandomMatroid{kind, n, ValueDistribution::kUniform}, rng()});
    const auto violation = check_matroid_axioms(inst.oracle());
    check.expect(!violation, [&] {
      return fmt::format("{} oracle on {} elements: {}", to_string(kind), n, *violation);
    });
  }

  // Every multigraph with up to 5 edges on 4 vertices, sampled.
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = uniform_int(rng, 1, 5);
    std::vector<GraphicMatroid::Edge> edges(n);
    for (auto& [a, b] : edges) {
      a = uniform_int(rng, 0, 3);
      b = uniform_int(rng, 0, 3);
    }
    const MatroidOracle g = MatroidOracle::graphic(edges);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
      const ElementSet set = from_mask(mask, n);
      const bool expected = is_forest_bfs(*g.as_graphic(), set);
      check.expect(g.is_independent(set) == expected, [&] {
        return fmt::format("graphic oracle disagrees with forest enumeration on mask {:#x}",
                           mask);
      });
    }
  }

  for (int t = 0; t < 20; ++t) {
    const std::size_t n = uniform_int(rng, 1, 12);
    const Instance inst =
        generate({RandomMatroid{MatroidKind::kExplicit, n, ValueDistribution::kUniform}, rng()});
    for (int w = 0; w < 100; ++w) {
      std::vector<double> values(n);
      for (auto& v : values) v = 1.0 - uniform01(rng);
      const double greedy = max_weight_basis(inst.oracle(), values).value;
      const double brute = brute_force_opt(inst.oracle(), values);
      check.deviation(relative_gap(greedy, brute));
      check.expect(relative_gap(greedy, brute) <= 1e-12, [&] {
        return fmt::format("max_weight_basis {} != brute force {}", greedy, brute);
      });
    }
  }

  for (int t = 0; t < 100; ++t) {
    const auto kind = static_cast<MatroidKind>(t % 4);
    const std::size_t n = uniform_int(rng, 2, 10);
    const Instance inst = generate({RandomMatroid{kind, n, ValueDistribution::kUniform}, rng()});
    GreedySeller seller;
    seller.reset(inst.oracle());
    for (Element i = 0; i < n; ++i) {
      ElementSet with = seller.held();
      with.push_back(i);
      if (!inst.oracle().is_independent(with)) {
        const auto j = find_swap_candidate(inst.oracle(), seller.held(), i, inst.values());
        bool feasible = false;
        if (j) {
          ElementSet swapped;
          for (Element e : seller.held()) {
            if (e != *j) swapped.push_back(e);
          }
          swapped.push_back(i);
          feasible = inst.oracle().is_independent(swapped);
        }
        check.expect(feasible, [&] { return fmt::format("infeasible swap candidate at {}", i); });
      }
      seller.offer(i, inst.value(i));
    }
  }
  return check.done();
}

SuiteResult verify_trace_invariants(const VerifyOptions& options) {
  Checker check("trace_invariants");
  Rng rng(derive_seed(options.seed, 2));
  for (int t = 0; t < 200; ++t) {
    const auto kind = static_cast<MatroidKind>(t % 4);
    const std::size_t n = uniform_int(rng, 1, kind == MatroidKind::kExplicit ? 10 : 30);
    const auto dist = t % 2 ? ValueDistribution::kLogUniform : ValueDistribution::kUniform;
    const Instance inst = generate({RandomMatroid{kind, n, dist}, rng()});
    const double f = 0.25 * static_cast<double>(t % 9);

    auto greedy = options.greedy();
    const Trace g = run_online(*greedy, inst);
    Rng trial(rng());
    const Trace r = run_randalg(inst, f, std::nullopt, trial);

    for (const Trace* trace : {&g, &r}) {
      const auto violation = validate_trace(*trace, inst.oracle());
      check.expect(!violation, [&] { return fmt::format("instance {}: {}", t, *violation); });
      const PayoffLedger ledger = payoff(*trace, inst.values(), f);
      const auto nets = prefix_nets(*trace, inst.values(), f);
      check.expect(relative_gap(nets.back(), ledger.net) <= 1e-12, [&] {
        return fmt::format("prefix net {} disagrees with ledger {}", nets.back(), ledger.net);
      });
    }
    // The greedy final set is a maximum-weight basis (values, not sets).
    const double final_value = payoff(g, inst.values(), 0.0).gross;
    const double opt = max_weight_basis(inst).value;
    check.deviation(relative_gap(final_value, opt));
    check.expect(relative_gap(final_value, opt) <= 1e-12, [&] {
      return fmt::format("greedy final value {} differs from OPT {}", final_value, opt);
    });
  }
  return check.done();
}

SuiteResult verify_filter_expectation(const VerifyOptions& options) {
  Checker check("filter_expectation");
  Rng rng(derive_seed(options.seed, 3));
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = uniform_int(rng, 1, 10);
    const auto dist = t % 2 ? ValueDistribution::kLogUniform : ValueDistribution::kUniform;
    const Instance inst = generate({RandomMatroid{MatroidKind::kExplicit, n, dist}, rng()});
    std::vector<double> w(n);
    for (Element i = 0; i < n; ++i) {
      w[i] = uniform_int(rng, 0, 4) == 0 ? inst.value(i)
                                          : inst.value(i) * (1.0 - uniform01(rng));
    }
    const double f = 0.5 * static_cast<double>(t % 5);
    const FilteredInstance filtered(inst, w);

    const double outer = filter_expected_net_exact(options.greedy, filtered, f);
    const Instance on_w(w, inst.oracle());
    auto inner = options.greedy();
    const double direct = payoff(run_online(*inner, on_w), w, f).net;
    const double gap = std::abs(outer - direct);
    check.deviation(gap);
    check.expect(gap < 1e-9, [&] {
      return fmt::format("instance {}: filtered expectation {} vs inner payoff {}", t, outer,
                         direct);
    });
  }
  return check.done();
}

SuiteResult verify_greedy_structured(const VerifyOptions& options) {
  Checker check("greedy_structured");
  constexpr double r = 4.0;
  constexpr double f = 1.0;
  Rng rng(derive_seed(options.seed, 4));
  for (int t = 0; t < 100; ++t) {
    const std::size_t rank = 1 + static_cast<std::size_t>(t % 10);
    const std::size_t n = uniform_int(rng, rank, 40);
    const std::size_t top = uniform_int(rng, 1, n);
    const Instance inst = generate({RStructuredRandom{r, rank, n, top}, rng()});
    check.expect(is_r_structured(inst.values(), r),
                 [&] { return fmt::format("instance {} not r-structured", t); });

    auto seller = options.greedy();
    const Trace trace = run_online(*seller, inst);
    const PayoffLedger ledger = payoff(trace, inst.values(), f);
    const double opt = max_weight_basis(inst).value;
    const double bought = ledger.penalty / f;

    const double net_floor = (1.0 - f / (r - 1.0)) * opt;
    check.expect(ledger.net >= net_floor * (1.0 - 1e-12), [&] {
      return fmt::format("instance {}: net {} below {} (OPT {})", t, ledger.net, net_floor, opt);
    });
    const double buyback_cap = f / (r - 1.0) * ledger.gross;
    check.expect(f * bought <= buyback_cap * (1.0 + 1e-12), [&] {
      return fmt::format("instance {}: buyback payment {} exceeds {}", t, f * bought,
                         buyback_cap);
    });
  }
  return check.done();
}

SuiteResult verify_rounding_distribution(const VerifyOptions& options) {
  Checker check("rounding_distribution");
  Rng rng(derive_seed(options.seed, 5));
  for (double r : {1.5, 2.0, std::numbers::e, 5.0}) {
    const double v = 1.0 + 100.0 * uniform01(rng);
    CompensatedSum sum;
    CompensatedSum sum_sq;
    const std::size_t n = options.rounding_samples;
    for (std::size_t s = 0; s < n; ++s) {
      const double ratio = round_value(v, {r, uniform01(rng)}) / v;
      check.expect(ratio <= 1.0 && ratio > 1.0 / r * (1.0 - 1e-12),
                   [&] { return fmt::format("w/v = {} outside (1/r, 1] for r = {}", ratio, r); });
      sum.add(ratio);
      sum_sq.add(ratio * ratio);
    }
    const double mean = sum.value() / static_cast<double>(n);
    const double var = (sum_sq.value() - mean * sum.value()) / static_cast<double>(n - 1);
    const double se = std::sqrt(var / static_cast<double>(n));
    const double expected = (r - 1.0) / (r * std::log(r));
    check.deviation(std::abs(mean - expected) / se);
    check.expect(std::abs(mean - expected) <= 3.0 * se, [&] {
      return fmt::format("r = {}: mean w/v {} vs {} (se {})", r, mean, expected, se);
    });

    // A common phase makes any batch of rounded values r-structured and keeps
    // the map monotone.
    const double u = uniform01(rng);
    std::vector<double> vs(20);
    for (auto& x : vs) x = std::exp(10.0 * uniform01(rng));
    std::sort(vs.begin(), vs.end());
    std::vector<double> ws;
    for (double x : vs) ws.push_back(round_value(x, {r, u}));
    check.expect(is_r_structured(ws, r),
                 [&] { return fmt::format("rounded values not {}-structured", r); });
    check.expect(std::is_sorted(ws.begin(), ws.end()),
                 [&] { return fmt::format("rounding not monotone for r = {}", r); });
  }
  return check.done();
}

SuiteResult verify_lambert(const VerifyOptions& options) {
  Checker check("lambert_w");
  Rng rng(derive_seed(options.seed, 6));
  for (int t = 0; t < 10000; ++t) {
    const double z = -(1.0 - uniform01(rng)) / std::numbers::e;
    const double w = lambert_w_lower(z);
    const double rel = std::abs(w * std::exp(w) - z) / std::abs(z);
    check.deviation(rel);
    check.expect(rel <= 1e-12 && w <= -1.0,
                 [&] { return fmt::format("W({}) = {} residual {}", z, w, rel); });
  }
  check.expect(competitive_ratio(0.0) == 1.0, [] { return std::string("c(0) != 1"); });
  return check.done();
}

SuiteResult verify_ratio_consistency(const VerifyOptions&) {
  Checker check("ratio_consistency");
  double previous_c = 1.0;
  double previous_r = 1.0;
  for (int step = 1; step <= 1000; ++step) {
    const double f = 0.01 * step;
    const double c = competitive_ratio(f);
    const double r = optimal_r(f);
    const double gap = std::abs(ratio_formula(r, f) - c);
    check.deviation(gap);
    check.expect(gap <= 1e-9,
                 [&] { return fmt::format("f = {}: ratio at r* {} vs c {}", f, c + gap, c); });
    check.expect(c > previous_c && r > previous_r && r > 1.0 + f,
                 [&] { return fmt::format("monotonicity broken at f = {}", f); });
    previous_c = c;
    previous_r = r;
    if (step % 50 == 0) {
      const double searched = optimal_r_by_search(f);
      check.expect(std::abs(searched - r) <= 1e-7 * r, [&] {
        return fmt::format("f = {}: golden-section argmin {} vs {}", f, searched, r);
      });
    }
  }
  return check.done();
}

SuiteResult verify_mark_structure(const VerifyOptions&) {
  Checker check("mark_structure");
  for (double f : {0.5, 1.0}) {
    for (double m : {4.0, 6.0}) {
      const double y = std::exp(m);
      const StopDistribution dist(y);
      for (std::size_t k = 1; k <= 3; ++k) {
        const MarkStrategy best = brute_force_optimal_marks(f, y, k);
        const auto u = best.marks();
        check.expect(std::abs(u[0] - 1.0) <= 1e-3, [&] {
          return fmt::format("f = {}, y = e^{}, k = {}: first mark {}", f, m, k, u[0]);
        });
        if (k == 3) {
          const double rel = std::abs(u[1] * u[1] - u[0] * u[2]) / (u[1] * u[1]);
          check.deviation(rel);
          check.expect(rel <= 1e-4, [&] {
            return fmt::format("f = {}, y = e^{}: marks {}, {}, {} not geometric", f, m, u[0],
                               u[1], u[2]);
          });
        }
        if (k >= 2) {
          const double p = expected_payoff(best, f, dist);
          const double geo = geometric_payoff(std::pow(y, 1.0 / static_cast<double>(k - 1)), k, f);
          check.expect(p >= geo - 1e-9, [&] {
            return fmt::format("brute force payoff {} below geometric {}", p, geo);
          });
        }
      }
    }
  }
  return check.done();
}

SuiteResult verify_lower_bound_sweep(const VerifyOptions&) {
  Checker check("lower_bound_sweep");
  for (double f : {0.5, 1.0, 2.0}) {
    const double c = competitive_ratio(f);
    check.expect(std::abs(max_rate_per_log(f) - 1.0 / c) <= 1e-9,
                 [&] { return fmt::format("f = {}: max rate {} vs 1/c {}", f, max_rate_per_log(f), 1.0 / c); });
    double previous = 0.0;
    for (int m = 2; m <= 20; m += 2) {
      const GeometricBound b = best_geometric(f, std::exp(m), 10000);
      check.expect(b.bound >= previous && b.bound <= c + 1e-9, [&] {
        return fmt::format("f = {}, y = e^{}: bound {} (previous {}, c {})", f, m, b.bound,
                           previous, c);
      });
      previous = b.bound;
      if (f == 1.0 && m == 20) {
        check.deviation(c - b.bound);
        check.expect(c - b.bound <= 0.35,
                     [&] { return fmt::format("gap at y = e^20 is {}", c - b.bound); });
      }
    }
  }
  return check.done();
}

std::vector<SuiteResult> run_all_suites(const VerifyOptions& options) {
  return {
      verify_matroid_oracles(options),   verify_trace_invariants(options),
      verify_filter_expectation(options), verify_greedy_structured(options),
      verify_rounding_distribution(options), verify_lambert(options),
      verify_ratio_consistency(options), verify_mark_structure(options),
      verify_lower_bound_sweep(options),
  };
}

}  // namespace buyback
