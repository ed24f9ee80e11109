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

#ifndef BUYBACK_ONLINE_H_
#define BUYBACK_ONLINE_H_

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "buyback/matroid.h"
#include "buyback/random.h"

namespace buyback {

// Online buyback algorithms and the trace/payoff bookkeeping around them.
//
// Every algorithm is an OnlineSeller: a state machine that sees one element
// at a time and answers whether to sell to it and which currently held
// element (if any) to buy back. run_online() drives a seller over an
// instance and records a Trace, from which the final set R, the buyback set
// B and the payoff val(R) - f val(B) follow.

enum class Decision {
  kSell,    // sell to the arriving element
  kSwap,    // sell to the arriving element and buy back `buyback`
  kReject,  // do not sell; `buyback` may still be set (see FilterSeller)
};

std::string_view to_string(Decision decision);

struct TraceEvent {
  Element element = 0;
  Decision decision = Decision::kReject;
  std::optional<Element> buyback;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Trace {
  std::vector<TraceEvent> events;  // one per arrival, in arrival order
  ElementSet final_set;            // R, ascending
  ElementSet buyback_set;          // B, ascending

  friend bool operator==(const Trace&, const Trace&) = default;
};

struct PayoffLedger {
  double f = 0.0;
  double gross = 0.0;    // val(R)
  double penalty = 0.0;  // f * val(B)
  double net = 0.0;      // gross - penalty
};

PayoffLedger payoff(const Trace& trace, std::span<const double> values, double f);

// Net payoff after each arrival: entry p-1 is the payoff had the sequence
// stopped after p elements. Valid because decisions never depend on the
// future.
std::vector<double> prefix_nets(const Trace& trace, std::span<const double> values, double f);

// Replays the trace against the oracle, checking that every intermediate
// held set is independent and obtained from the previous one plus the
// arriving element, that buybacks only touch held elements, and that R and B
// match the replay. Returns the first violation.
std::optional<std::string> validate_trace(const Trace& trace, const MatroidOracle& oracle);

struct SellerStep {
  bool sell = false;
  std::optional<Element> buyback;
};

class OnlineSeller {
 public:
  virtual ~OnlineSeller() = default;
  // Called once before the first arrival.
  virtual void reset(const MatroidOracle& oracle) = 0;
  virtual SellerStep offer(Element element, double value) = 0;
};

// Drives `seller` over the instance. Zero-valued elements are rejected
// without being offered.
Trace run_online(OnlineSeller& seller, const Instance& instance);

// Greedy matroid algorithm: sell when independence allows; otherwise swap
// out the cheapest element whose removal restores independence, but only if
// it is strictly cheaper than the arrival.
class GreedySeller final : public OnlineSeller {
 public:
  void reset(const MatroidOracle& oracle) override;
  SellerStep offer(Element element, double value) override;

  const ElementSet& held() const { return held_; }

 private:
  const MatroidOracle* oracle_ = nullptr;
  ElementSet held_;
  ElementSet scratch_;
  std::vector<double> values_;
};

// Random filtering reduction. The inner seller sees values w_i <= v_i; the
// outer seller sells to i only if the inner one does and the coin x_i (heads
// with probability w_i / v_i, flipped once at arrival) is heads, and buys
// back j only if the inner one does and x_j was heads.
class FilterSeller final : public OnlineSeller {
 public:
  // Maps (element, v_i) to the filtered value w_i.
  using WeightFn = std::function<double(Element, double)>;
  // Returns the coin x_i given the heads probability w_i / v_i.
  using CoinFn = std::function<bool(Element, double)>;

  FilterSeller(std::unique_ptr<OnlineSeller> inner, WeightFn weight, CoinFn coin);

  void reset(const MatroidOracle& oracle) override;
  SellerStep offer(Element element, double value) override;

  OnlineSeller& inner() { return *inner_; }

 private:
  std::unique_ptr<OnlineSeller> inner_;
  WeightFn weight_;
  CoinFn coin_;
  std::vector<char> coins_;
};

struct RoundingParams {
  double r = 2.0;  // base, > 1 + f
  double u = 0.0;  // phase in [0, 1]
};

// w = r^z with z = u + floor(log_r(v) - u): the largest point of the lattice
// {r^(u + k) : k integer} not exceeding v. Throws std::domain_error for
// v <= 0, r <= 1 or u outside [0, 1].
double round_value(double v, const RoundingParams& params);

// Randomized rounding + filtering over the greedy algorithm. Draws one global
// phase u at reset() before any arrival, rounds each v_i to w_i on arrival
// and flips its coin then. A null base means the f = 0 limit r -> 1+, where
// rounding is the identity and every coin is heads.
class RandomizedSeller final : public OnlineSeller {
 public:
  RandomizedSeller(std::optional<double> base, Rng& rng);
  RandomizedSeller(const RandomizedSeller&) = delete;
  RandomizedSeller& operator=(const RandomizedSeller&) = delete;

  void reset(const MatroidOracle& oracle) override;
  SellerStep offer(Element element, double value) override;

  double phase() const { return params_.u; }

 private:
  std::optional<double> base_;
  Rng* rng_;
  RoundingParams params_;
  FilterSeller filter_;
};

// Values of a filtered instance share the arrival order and oracle of the
// base instance and satisfy 0 < w_i <= v_i wherever v_i > 0.
class FilteredInstance {
 public:
  FilteredInstance(Instance base, std::vector<double> filtered_values);

  const Instance& base() const { return base_; }
  std::span<const double> filtered_values() const { return filtered_; }

 private:
  Instance base_;
  std::vector<double> filtered_;
};

Trace run_gma(const Instance& instance, double f);

// Filter(inner) with coins drawn from `rng`, one per arrival.
Trace run_filter(std::unique_ptr<OnlineSeller> inner, const FilteredInstance& filtered, double f,
                 Rng& rng);

// Filter(inner) with the coins fixed in advance (coins[i] is x_i). Used for
// exact enumeration of the filter's expectation.
Trace run_filter_with_coins(std::unique_ptr<OnlineSeller> inner,
                            const FilteredInstance& filtered, double f,
                            const std::vector<bool>& coins);

// Resolves the rounding base used by run_randalg: `r` if given (must exceed
// 1 + f), else the optimal base; nullopt encodes the f = 0 limit.
std::optional<double> resolve_rounding_base(double f, std::optional<double> r);

Trace run_randalg(const Instance& instance, double f, std::optional<double> r, Rng& rng);

// True when every pairwise ratio of the positive values is an integer power
// of r, to a relative tolerance on the exponent.
bool is_r_structured(std::span<const double> values, double r, double tolerance = 1e-9);

}  // namespace buyback

#endif  // BUYBACK_ONLINE_H_
