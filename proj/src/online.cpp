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

#include "buyback/online.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "buyback/numeric.h"
#include "buyback/ratio.h"

namespace buyback {
namespace {

void require_factor(double f) {
  if (!(f >= 0.0) || !std::isfinite(f)) {
    throw std::invalid_argument(fmt::format("buyback factor f = {} must be finite and >= 0", f));
  }
}

bool contains(const ElementSet& set, Element e) {
  return std::find(set.begin(), set.end(), e) != set.end();
}

void erase(ElementSet& set, Element e) {
  set.erase(std::find(set.begin(), set.end(), e));
}

}  // namespace

std::string_view to_string(Decision decision) {
  switch (decision) {
    case Decision::kSell:
      return "sell";
    case Decision::kSwap:
      return "swap";
    case Decision::kReject:
      return "reject";
  }
  return "unknown";
}

PayoffLedger payoff(const Trace& trace, std::span<const double> values, double f) {
  require_factor(f);
  PayoffLedger ledger;
  ledger.f = f;
  double bought = 0.0;
  for (Element e : trace.final_set) ledger.gross += values[e];
  for (Element e : trace.buyback_set) bought += values[e];
  ledger.penalty = f * bought;
  ledger.net = ledger.gross - ledger.penalty;
  return ledger;
}

std::vector<double> prefix_nets(const Trace& trace, std::span<const double> values, double f) {
  require_factor(f);
  std::vector<double> nets;
  nets.reserve(trace.events.size());
  CompensatedSum held;
  CompensatedSum bought;
  for (const TraceEvent& ev : trace.events) {
    if (ev.decision != Decision::kReject) held.add(values[ev.element]);
    if (ev.buyback) {
      held.add(-values[*ev.buyback]);
      bought.add(values[*ev.buyback]);
    }
    nets.push_back(held.value() - f * bought.value());
  }
  return nets;
}

std::optional<std::string> validate_trace(const Trace& trace, const MatroidOracle& oracle) {
  ElementSet held;
  ElementSet bought;
  std::vector<char> seen(oracle.ground_size(), 0);
  for (std::size_t step = 0; step < trace.events.size(); ++step) {
    const TraceEvent& ev = trace.events[step];
    if (ev.element >= oracle.ground_size()) {
      return fmt::format("step {}: element {} outside ground set", step, ev.element);
    }
    if (seen[ev.element]) return fmt::format("step {}: element {} arrives twice", step, ev.element);
    seen[ev.element] = 1;
    if (ev.decision == Decision::kSwap && !ev.buyback) {
      return fmt::format("step {}: swap without a bought-back element", step);
    }
    if (ev.decision == Decision::kSell && ev.buyback) {
      return fmt::format("step {}: plain sell carries a buyback", step);
    }
    if (ev.buyback) {
      if (!contains(held, *ev.buyback)) {
        return fmt::format("step {}: buyback of {} which is not held", step, *ev.buyback);
      }
      erase(held, *ev.buyback);
      bought.push_back(*ev.buyback);
    }
    if (ev.decision != Decision::kReject) held.push_back(ev.element);
    if (!oracle.is_independent(held)) {
      return fmt::format("step {}: held set is dependent after element {}", step, ev.element);
    }
  }
  std::sort(held.begin(), held.end());
  std::sort(bought.begin(), bought.end());
  if (held != trace.final_set) return std::string("final set does not match replay");
  if (bought != trace.buyback_set) return std::string("buyback set does not match replay");
  return std::nullopt;
}

Trace run_online(OnlineSeller& seller, const Instance& instance) {
  Trace trace;
  trace.events.reserve(instance.size());
  ElementSet held;
  seller.reset(instance.oracle());
  for (Element i = 0; i < instance.size(); ++i) {
    TraceEvent ev{i, Decision::kReject, std::nullopt};
    if (instance.value(i) > 0.0) {
      const SellerStep step = seller.offer(i, instance.value(i));
      if (step.buyback) {
        if (!contains(held, *step.buyback)) {
          throw std::logic_error(
              fmt::format("seller bought back {} which it does not hold", *step.buyback));
        }
        erase(held, *step.buyback);
        trace.buyback_set.push_back(*step.buyback);
      }
      if (step.sell) held.push_back(i);
      ev.buyback = step.buyback;
      ev.decision = !step.sell ? Decision::kReject
                               : (step.buyback ? Decision::kSwap : Decision::kSell);
    }
    trace.events.push_back(ev);
  }
  std::sort(held.begin(), held.end());
  std::sort(trace.buyback_set.begin(), trace.buyback_set.end());
  trace.final_set = std::move(held);
  return trace;
}

void GreedySeller::reset(const MatroidOracle& oracle) {
  oracle_ = &oracle;
  held_.clear();
  values_.assign(oracle.ground_size(), 0.0);
}

SellerStep GreedySeller::offer(Element element, double value) {
  values_[element] = value;
  scratch_.assign(held_.begin(), held_.end());
  scratch_.push_back(element);
  if (oracle_->is_independent(scratch_)) {
    held_.push_back(element);
    return {true, std::nullopt};
  }
  const std::optional<Element> cheapest =
      find_swap_candidate(*oracle_, held_, element, values_);
  if (cheapest && values_[*cheapest] < value) {
    erase(held_, *cheapest);
    held_.push_back(element);
    return {true, cheapest};
  }
  return {false, std::nullopt};
}

FilterSeller::FilterSeller(std::unique_ptr<OnlineSeller> inner, WeightFn weight, CoinFn coin)
    : inner_(std::move(inner)), weight_(std::move(weight)), coin_(std::move(coin)) {}

void FilterSeller::reset(const MatroidOracle& oracle) {
  inner_->reset(oracle);
  coins_.assign(oracle.ground_size(), 0);
}

SellerStep FilterSeller::offer(Element element, double value) {
  const double w = weight_(element, value);
  if (!(w > 0.0) || w > value) {
    throw std::invalid_argument(
        fmt::format("filtered value {} for element {} must lie in (0, {}]", w, element, value));
  }
  const bool heads = coin_(element, w / value);
  coins_[element] = heads;
  const SellerStep inner = inner_->offer(element, w);

  SellerStep outer;
  outer.sell = inner.sell && heads;
  if (inner.buyback && coins_[*inner.buyback]) outer.buyback = inner.buyback;
  return outer;
}

double round_value(double v, const RoundingParams& params) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(fmt::format("round_value: v = {} must be positive", v));
  }
  if (!(params.r > 1.0) || !std::isfinite(params.r)) {
    throw std::domain_error(fmt::format("round_value: base r = {} must exceed 1", params.r));
  }
  if (!(params.u >= 0.0 && params.u <= 1.0)) {
    throw std::domain_error(fmt::format("round_value: phase u = {} outside [0, 1]", params.u));
  }
  const double log_r = std::log(params.r);
  double k = std::floor(std::log(v) / log_r - params.u);
  // The floating-point logarithm can land on the wrong side of a lattice
  // point; settle on the largest lattice point <= v.
  while (std::pow(params.r, params.u + k) > v) k -= 1.0;
  while (std::pow(params.r, params.u + k + 1.0) <= v) k += 1.0;
  return std::pow(params.r, params.u + k);
}

RandomizedSeller::RandomizedSeller(std::optional<double> base, Rng& rng)
    : base_(base),
      rng_(&rng),
      filter_(
          std::make_unique<GreedySeller>(),
          [this](Element, double v) { return base_ ? round_value(v, params_) : v; },
          [this](Element, double p) { return uniform01(*rng_) < p; }) {}

void RandomizedSeller::reset(const MatroidOracle& oracle) {
  params_.r = base_.value_or(1.0);
  params_.u = base_ ? uniform01(*rng_) : 0.0;
  filter_.reset(oracle);
}

SellerStep RandomizedSeller::offer(Element element, double value) {
  return filter_.offer(element, value);
}

FilteredInstance::FilteredInstance(Instance base, std::vector<double> filtered_values)
    : base_(std::move(base)), filtered_(std::move(filtered_values)) {
  if (filtered_.size() != base_.size()) {
    throw std::invalid_argument("filtered values must cover every element");
  }
  for (Element i = 0; i < filtered_.size(); ++i) {
    const double v = base_.value(i);
    const double w = filtered_[i];
    const bool ok = v > 0.0 ? (w > 0.0 && w <= v) : w == 0.0;
    if (!ok) {
      throw std::invalid_argument(
          fmt::format("filtered value w[{}] = {} violates 0 < w <= v = {}", i, w, v));
    }
  }
}

Trace run_gma(const Instance& instance, double f) {
  require_factor(f);
  GreedySeller seller;
  return run_online(seller, instance);
}

Trace run_filter(std::unique_ptr<OnlineSeller> inner, const FilteredInstance& filtered, double f,
                 Rng& rng) {
  require_factor(f);
  const auto w = filtered.filtered_values();
  FilterSeller seller(
      std::move(inner), [w](Element i, double) { return w[i]; },
      [&rng](Element, double p) { return uniform01(rng) < p; });
  return run_online(seller, filtered.base());
}

Trace run_filter_with_coins(std::unique_ptr<OnlineSeller> inner,
                            const FilteredInstance& filtered, double f,
                            const std::vector<bool>& coins) {
  require_factor(f);
  if (coins.size() != filtered.base().size()) {
    throw std::invalid_argument("one coin per element required");
  }
  const auto w = filtered.filtered_values();
  FilterSeller seller(
      std::move(inner), [w](Element i, double) { return w[i]; },
      [&coins](Element i, double) { return static_cast<bool>(coins[i]); });
  return run_online(seller, filtered.base());
}

std::optional<double> resolve_rounding_base(double f, std::optional<double> r) {
  require_factor(f);
  if (r) {
    if (!(*r > 1.0 + f) || !std::isfinite(*r)) {
      throw std::invalid_argument(
          fmt::format("rounding base r = {} must exceed 1 + f = {}", *r, 1.0 + f));
    }
    return r;
  }
  const RatioConstants constants = ratio_constants(f);
  if (constants.degenerate) return std::nullopt;
  return constants.r_star;
}

Trace run_randalg(const Instance& instance, double f, std::optional<double> r, Rng& rng) {
  RandomizedSeller seller(resolve_rounding_base(f, r), rng);
  return run_online(seller, instance);
}

bool is_r_structured(std::span<const double> values, double r, double tolerance) {
  const double log_r = std::log(r);
  const double* anchor = nullptr;
  for (const double& v : values) {
    if (!(v > 0.0)) continue;
    if (!anchor) {
      anchor = &v;
      continue;
    }
    // Ratios to a common anchor being powers of r implies all pairwise
    // ratios are.
    const double exponent = std::log(v / *anchor) / log_r;
    if (std::abs(exponent - std::round(exponent)) > tolerance * std::max(1.0, std::abs(exponent))) {
      return false;
    }
  }
  return true;
}

}  // namespace buyback
