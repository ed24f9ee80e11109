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

#ifndef BUYBACK_RATIO_H_
#define BUYBACK_RATIO_H_

namespace buyback {

// Lower real branch W_{-1} of the inverse of w -> w e^w, for z in [-1/e, 0).
// Returns a value <= -1. Halley iteration from a branch-point series (near
// -1/e) or the asymptotic log expansion (near 0), with bisection as fallback.
// Throws std::domain_error outside the domain.
double lambert_w_lower(double z);

// Optimal randomized competitive ratio -W_{-1}(-1 / (e (1 + f))).
// Exactly 1 at f = 0. Throws std::domain_error for f < 0.
double competitive_ratio(double f);

// Competitive ratio r ln r / (r - 1 - f) of randomized rounding with base r.
// Throws std::domain_error unless r > 1 + f.
double ratio_formula(double r, double f);

// Greedy guarantee (r - 1) / (r - 1 - f) on r-structured instances.
double gma_ratio_bound(double r, double f);

// The rounding base minimizing ratio_formula, (1 + f) * competitive_ratio(f).
// At f = 0 no minimizer exists in (1, inf); the infimum 1 is returned and
// ratio_constants() reports the case as degenerate.
double optimal_r(double f);

struct RatioConstants {
  double f = 0.0;
  double c_star = 1.0;
  double r_star = 1.0;
  bool degenerate = false;  // f == 0: r_star is an infimum, not attained
};

RatioConstants ratio_constants(double f);

// Golden-section argmin of ratio_formula(., f) over (1 + f, 10 (1 + f) + 10).
// Independent cross-check of optimal_r; requires f > 0.
double optimal_r_by_search(double f, double tolerance = 1e-10);

}  // namespace buyback

#endif  // BUYBACK_RATIO_H_
