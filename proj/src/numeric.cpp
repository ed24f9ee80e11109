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

#include "buyback/numeric.h"

#include <stdexcept>

namespace buyback {

ScalarOptimum golden_section_maximize(const std::function<double(double)>& fn, double lo,
                                      double hi, double tolerance, int max_iterations) {
  if (!(lo <= hi)) throw std::invalid_argument("golden section: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < max_iterations && (b - a) > tolerance; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }

  ScalarOptimum best{lo, fn(lo)};
  const double mid = 0.5 * (a + b);
  for (double x : {mid, hi}) {
    const double v = fn(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

ScalarOptimum golden_section_minimize(const std::function<double(double)>& fn, double lo,
                                      double hi, double tolerance, int max_iterations) {
  ScalarOptimum best = golden_section_maximize([&](double x) { return -fn(x); }, lo, hi,
                                               tolerance, max_iterations);
  best.value = -best.value;
  return best;
}

}  // namespace buyback
