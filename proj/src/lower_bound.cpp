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

#include "buyback/lower_bound.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>

#include "buyback/numeric.h"

namespace buyback {
namespace {

constexpr std::size_t kInteriorGridPoints = 16;

// Payoff formula without validation, so nested searches may probe
// coincident marks.
double payoff_of(std::span<const double> marks, double f, const StopDistribution& dist) {
  double total = 0.0;
  double previous = 0.0;
  for (double u : marks) {
    total += (u - (1.0 + f) * previous) * dist.survival(u);
    previous = u;
  }
  return total;
}

}  // namespace

StopDistribution::StopDistribution(double horizon) : horizon_(horizon) {
  if (!(horizon > 1.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument(fmt::format("horizon y = {} must be finite and > 1", horizon));
  }
}

double StopDistribution::survival(double x) const {
  if (x <= 1.0) return 1.0;
  if (x <= horizon_) return 1.0 / x;
  return 0.0;
}

double StopDistribution::quantile(double q) const {
  if (!(q >= 0.0 && q < 1.0)) {
    throw std::invalid_argument(fmt::format("quantile q = {} outside [0, 1)", q));
  }
  return std::min(1.0 / (1.0 - q), horizon_);
}

MarkStrategy::MarkStrategy(std::vector<double> marks) : marks_(std::move(marks)) {
  if (marks_.empty()) throw std::invalid_argument("a mark strategy needs at least one mark");
  if (!(marks_.front() >= 1.0)) {
    throw std::invalid_argument(fmt::format("first mark {} precedes time 1", marks_.front()));
  }
  for (std::size_t i = 1; i < marks_.size(); ++i) {
    if (!(marks_[i] > marks_[i - 1])) {
      throw std::invalid_argument(
          fmt::format("marks must be strictly increasing ({} then {})", marks_[i - 1], marks_[i]));
    }
  }
}

MarkStrategy GeometricStrategy::marks() const {
  if (!(ratio > 1.0) || count == 0) {
    throw std::invalid_argument("geometric strategy needs ratio > 1 and at least one mark");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::pow(ratio, static_cast<double>(i));
  return MarkStrategy(std::move(out));
}

double expected_payoff(const MarkStrategy& strategy, double f, const StopDistribution& dist) {
  if (strategy.marks().back() > dist.horizon()) {
    throw std::invalid_argument(fmt::format("mark {} lies beyond the horizon {}",
                                            strategy.marks().back(), dist.horizon()));
  }
  return payoff_of(strategy.marks(), f, dist);
}

double prophet_value(const StopDistribution& dist) {
  return 1.0 + std::log(dist.horizon());
}

double sample_stop_time(const StopDistribution& dist, Rng& rng) {
  return dist.quantile(uniform01(rng));
}

double realized_payoff(const MarkStrategy& strategy, double f, double x) {
  if (!(x >= 1.0)) throw std::invalid_argument(fmt::format("stop time {} precedes time 1", x));
  const auto marks = strategy.marks();
  double earlier = 0.0;
  double last = 0.0;
  for (double u : marks) {
    if (u > x) break;
    earlier += last;
    last = u;
  }
  return last - f * earlier;
}

double geometric_payoff(double ratio, std::size_t count, double f) {
  return 1.0 + static_cast<double>(count - 1) * (ratio - 1.0 - f) / ratio;
}

GeometricBound best_geometric(double f, double horizon, std::size_t k_max) {
  if (k_max < 2) throw std::invalid_argument("best_geometric needs k_max >= 2");
  const StopDistribution dist(horizon);
  GeometricBound best;
  best.strategy = {horizon, 1};
  best.payoff = 1.0;
  const double log_y = std::log(horizon);

  for (std::size_t k = 2; k <= k_max; ++k) {
    const double log_w_max = log_y / static_cast<double>(k - 1);
    for (std::size_t j = kInteriorGridPoints; j >= 1; --j) {
      const double w = j == kInteriorGridPoints
                           ? std::pow(horizon, 1.0 / static_cast<double>(k - 1))
                           : std::exp(log_w_max * static_cast<double>(j) / kInteriorGridPoints);
      if (!(w > 1.0)) continue;
      const double p = geometric_payoff(w, k, f);
      if (p > best.payoff) {
        best.strategy = {w, k};
        best.payoff = p;
      }
    }
  }
  best.prophet = prophet_value(dist);
  best.bound = best.prophet / best.payoff;
  return best;
}

double max_rate_per_log(double f) {
  if (!(f >= 0.0)) throw std::invalid_argument("buyback factor must be >= 0");
  // Supremum approached as u -> 1+.
  if (f == 0.0) return 1.0;
  auto rate = [f](double u) { return (u - 1.0 - f) / (u * std::log(u)); };
  // The maximizer is (1 + f) times the optimal ratio, well inside this range.
  const double lo = 1.0 + f;
  const double hi = 100.0 * (1.0 + f) + 100.0;
  return golden_section_maximize(rate, lo, hi, 1e-12).value;
}

MarkStrategy brute_force_optimal_marks(double f, double horizon, std::size_t k, double tolerance) {
  if (k == 0 || k > 3) {
    throw std::invalid_argument(fmt::format("brute force supports 1 to 3 marks, got {}", k));
  }
  const StopDistribution dist(horizon);
  const double log_y = std::log(horizon);
  std::vector<double> marks(k);

  // Optimizes coordinates depth..k-1 given the earlier ones, leaving the
  // best choice in `marks` and returning its payoff.
  std::function<double(std::size_t, double)> optimize = [&](std::size_t depth,
                                                            double lo) -> double {
    auto score = [&](double t) {
      marks[depth] = std::exp(t);
      if (depth + 1 == k) return payoff_of(marks, f, dist);
      return optimize(depth + 1, t);
    };
    const ScalarOptimum best = golden_section_maximize(score, lo, log_y, tolerance);
    // Re-run at the optimum so the deeper coordinates match it.
    return score(best.x);
  };
  optimize(0, 0.0);
  return MarkStrategy(marks);
}

std::vector<double> discretize_to_bids(double delta, double horizon) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument(fmt::format("delta = {} must be positive", delta));
  }
  std::vector<double> bids;
  double k = 0.0;
  while (true) {
    const double bid = std::pow(1.0 + delta, k);
    bids.push_back(bid);
    if (bid >= horizon) break;
    k += 1.0;
  }
  return bids;
}

std::vector<double> accepted_marks(const Trace& trace, std::span<const double> bids) {
  std::vector<double> marks;
  for (const TraceEvent& ev : trace.events) {
    if (ev.decision != Decision::kReject) marks.push_back(bids[ev.element]);
  }
  return marks;
}

}  // namespace buyback
