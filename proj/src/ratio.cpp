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

#include "buyback/ratio.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "buyback/numeric.h"

namespace buyback {
namespace {

constexpr double kBranchPoint = -1.0 / std::numbers::e;
constexpr int kMaxHalleySteps = 50;
constexpr double kStepTolerance = 1e-15;

// Series in p = -sqrt(2 (1 + e z)) about the branch point.
double branch_point_guess(double z) {
  const double p = -std::sqrt(std::max(0.0, 2.0 * (1.0 + std::numbers::e * z)));
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

double asymptotic_guess(double z) {
  const double l1 = std::log(-z);
  const double l2 = std::log(-l1);
  return l1 - l2 + l2 / l1;
}

// w e^w is strictly decreasing on (-inf, -1], from 0- down to -1/e.
double bisect(double z) {
  double hi = -1.0;
  double lo = std::min(-2.0, 2.0 * std::log(-z) - 2.0);
  while (lo * std::exp(lo) < z) lo *= 2.0;
  for (int it = 0; it < 2000 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * -lo;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) > z) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_rate_domain(double r, double f) {
  if (!(f >= 0.0)) throw std::domain_error(fmt::format("buyback factor f = {} must be >= 0", f));
  if (!(r > 1.0 + f)) {
    throw std::domain_error(fmt::format("rounding base r = {} must exceed 1 + f = {}", r, 1.0 + f));
  }
}

}  // namespace

double lambert_w_lower(double z) {
  if (!(z < 0.0) || z < kBranchPoint) {
    throw std::domain_error(fmt::format("lambert_w_lower: z = {} outside [-1/e, 0)", z));
  }
  if (z == kBranchPoint) return -1.0;

  double w = z < -0.25 ? branch_point_guess(z) : asymptotic_guess(z);
  if (!(w <= -1.0)) w = -1.0 - 1e-8;

  for (int step = 0; step < kMaxHalleySteps; ++step) {
    const double ew = std::exp(w);
    const double residual = w * ew - z;
    if (residual == 0.0) return w;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * residual / (2.0 * wp1);
    const double delta = residual / denom;
    double next = w - delta;
    if (!std::isfinite(next)) break;
    // Stay on the lower branch.
    if (next > -1.0) next = 0.5 * (w - 1.0);
    if (std::abs(next - w) <= kStepTolerance * std::abs(next)) return next;
    w = next;
  }
  return bisect(z);
}

double competitive_ratio(double f) {
  if (!(f >= 0.0)) throw std::domain_error(fmt::format("buyback factor f = {} must be >= 0", f));
  if (f == 0.0) return 1.0;
  return -lambert_w_lower(-1.0 / (std::numbers::e * (1.0 + f)));
}

double ratio_formula(double r, double f) {
  require_rate_domain(r, f);
  return r * std::log(r) / (r - 1.0 - f);
}

double gma_ratio_bound(double r, double f) {
  require_rate_domain(r, f);
  return (r - 1.0) / (r - 1.0 - f);
}

double optimal_r(double f) {
  return (1.0 + f) * competitive_ratio(f);
}

RatioConstants ratio_constants(double f) {
  RatioConstants out;
  out.f = f;
  out.c_star = competitive_ratio(f);
  out.r_star = (1.0 + f) * out.c_star;
  out.degenerate = (f == 0.0);
  return out;
}

double optimal_r_by_search(double f, double tolerance) {
  if (!(f > 0.0)) throw std::domain_error("optimal_r_by_search requires f > 0");
  const double lo = 1.0 + f;
  const double hi = 10.0 * (1.0 + f) + 10.0;
  // The open endpoint lo is a pole; nudge inside.
  const double start = lo * (1.0 + 1e-12);
  return golden_section_minimize([f](double r) { return ratio_formula(r, f); }, start, hi,
                                 tolerance)
      .x;
}

}  // namespace buyback
