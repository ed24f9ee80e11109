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

#ifndef BUYBACK_NUMERIC_H_
#define BUYBACK_NUMERIC_H_

#include <cmath>
#include <cstddef>
#include <functional>

namespace buyback {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.carry_);
  }

  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section search for the maximum of a unimodal function on [lo, hi],
// stopping once the bracket is narrower than `tolerance`. The endpoints are
// compared against the interior optimum, so optima sitting on the boundary
// are returned exactly; ties prefer the smaller x.
ScalarOptimum golden_section_maximize(const std::function<double(double)>& fn, double lo,
                                      double hi, double tolerance, int max_iterations = 500);

ScalarOptimum golden_section_minimize(const std::function<double(double)>& fn, double lo,
                                      double hi, double tolerance, int max_iterations = 500);

}  // namespace buyback

#endif  // BUYBACK_NUMERIC_H_
