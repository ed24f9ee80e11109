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

#ifndef BUYBACK_LOWER_BOUND_H_
#define BUYBACK_LOWER_BOUND_H_

#include <cstddef>
#include <span>
#include <vector>

#include "buyback/online.h"
#include "buyback/random.h"

namespace buyback {

// Continuous-time single-item game. Time starts at 1 and stops at an unknown
// time x; the seller places marks, and its payoff is the time of the last
// mark at or before x minus f times the sum of the earlier marks.
//
// The adversary's stopping time has density 1/x^2 on [1, y) plus a point
// mass 1/y at y, so its survival function is G(x) = P(X >= x) = 1/x on
// [1, y] and 0 beyond.
class StopDistribution {
 public:
  explicit StopDistribution(double horizon);

  double horizon() const { return horizon_; }
  double survival(double x) const;
  // Inverse-CDF map from a quantile q in [0, 1) to a stopping time.
  double quantile(double q) const;

 private:
  double horizon_;
};

// Strictly increasing mark times inside [1, y].
class MarkStrategy {
 public:
  explicit MarkStrategy(std::vector<double> marks);

  std::span<const double> marks() const { return marks_; }
  std::size_t size() const { return marks_.size(); }

 private:
  std::vector<double> marks_;
};

// Marks {1, w, ..., w^(k-1)}.
struct GeometricStrategy {
  double ratio = 2.0;
  std::size_t count = 1;

  MarkStrategy marks() const;
};

// sum_i (u_i - (1 + f) u_{i-1}) G(u_i) with u_0 = 0. Throws
// std::invalid_argument for marks outside [1, y].
double expected_payoff(const MarkStrategy& strategy, double f, const StopDistribution& dist);

// Expected stopping time 1 + ln y: the payoff of a seller who knows x.
double prophet_value(const StopDistribution& dist);

double sample_stop_time(const StopDistribution& dist, Rng& rng);

// Payoff when the game stops at x >= 1.
double realized_payoff(const MarkStrategy& strategy, double f, double x);

// 1 + (k - 1)(w - 1 - f) / w.
double geometric_payoff(double ratio, std::size_t count, double f);

struct GeometricBound {
  GeometricStrategy strategy;
  double payoff = 0.0;   // P
  double prophet = 0.0;  // V = 1 + ln y
  double bound = 0.0;    // V / P, a lower bound on any competitive ratio
};

// Best geometric strategy with at most k_max marks. For each k the boundary
// ratio y^(1/(k-1)) and a log-spaced grid of smaller ratios are scored.
GeometricBound best_geometric(double f, double horizon, std::size_t k_max);

// max_u (u - 1 - f) / (u ln u) by golden-section search; equals
// 1 / competitive_ratio(f).
double max_rate_per_log(double f);

// Maximizes expected_payoff over all increasing k-mark vectors in [1, y]
// (k <= 3) by nested golden-section search in log-time, each coordinate to
// `tolerance`.
MarkStrategy brute_force_optimal_marks(double f, double horizon, std::size_t k,
                                       double tolerance = 1e-8);

// Geometric bid stream 1, 1+delta, (1+delta)^2, ... up to and including the
// first value >= y.
std::vector<double> discretize_to_bids(double delta, double horizon);

// Marks realized by a single-item run over a bid stream: the values of the
// bids it sold to, in arrival order.
std::vector<double> accepted_marks(const Trace& trace, std::span<const double> bids);

}  // namespace buyback

#endif  // BUYBACK_LOWER_BOUND_H_
