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

#ifndef BUYBACK_HARNESS_H_
#define BUYBACK_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "buyback/matroid.h"
#include "buyback/online.h"

namespace buyback {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Single item, values base^0 .. base^(length-1) in increasing order.
struct GeometricStream {
  double base = 2.0;
  std::size_t length = 1;
};

// Uniform matroid of the given rank with values r^k, k uniform in
// [0, max_exponent] (max_exponent 0 means n).
struct RStructuredRandom {
  double r = 2.0;
  std::size_t rank = 1;
  std::size_t n = 1;
  std::size_t max_exponent = 0;
};

enum class ValueDistribution {
  kUniform,     // (0, 1]
  kLogUniform,  // [1, 1000), uniform in log scale
};

// Random matroid of the given kind on n elements. Explicit matroids are
// enumerated from a random uniform, partition or graphic matroid and are
// limited to 12 elements.
struct RandomMatroid {
  MatroidKind kind = MatroidKind::kUniform;
  std::size_t n = 1;
  ValueDistribution values = ValueDistribution::kUniform;
};

struct GeneratorSpec {
  std::variant<GeometricStream, RStructuredRandom, RandomMatroid> kind;
  std::uint64_t seed = 0;
};

// Deterministic in (spec, seed). Throws ConfigError on invalid parameters.
Instance generate(const GeneratorSpec& spec);

// Parses "geometric:base=2,length=5", "rstructured:r=4,rank=3,n=20" or
// "random:kind=graphic,n=30,values=uniform". A "seed=" key overrides
// `default_seed`.
GeneratorSpec parse_generator(std::string_view text, std::uint64_t default_seed);

// Short stable identifier, e.g. "geometric(base=2,length=5)".
std::string describe(const GeneratorSpec& spec);

enum class AlgorithmId { kGreedy, kRandomized };

std::string_view to_string(AlgorithmId id);
AlgorithmId parse_algorithm(std::string_view name);  // "gma" or "randalg"

// One run of the algorithm with its own RNG seeded from `seed`.
Trace run_algorithm(AlgorithmId id, const Instance& instance, double f,
                    std::optional<double> r, std::uint64_t seed);

struct RatioReport {
  std::string algorithm;
  std::string instance;
  double f = 0.0;
  std::size_t trials = 0;
  double mean_net = 0.0;
  double stderr_net = 0.0;  // sample standard deviation / sqrt(trials)
  double opt = 0.0;
  double empirical_ratio = 0.0;    // opt / mean_net; +inf when mean_net <= 0 < opt
  double theoretical_bound = 0.0;  // NaN when no bound applies
  std::uint64_t seed = 0;
};

// Trial t runs with seed derive_seed(seed, t). Results are bit-identical for
// any number of worker threads.
RatioReport estimate_expected_payoff(AlgorithmId algorithm, const Instance& instance, double f,
                                     std::size_t trials, std::uint64_t seed,
                                     std::optional<double> r = std::nullopt,
                                     std::string instance_id = "instance");

struct PrefixPoint {
  std::size_t prefix = 0;  // number of arrivals
  double opt = 0.0;
  double mean_net = 0.0;
  double stderr_net = 0.0;
  double ratio = 0.0;
  double ratio_stderr = 0.0;  // delta method: opt * stderr / mean^2
};

struct PrefixProfile {
  std::vector<PrefixPoint> points;
  std::size_t worst = 0;  // index into points of the largest ratio

  const PrefixPoint& worst_point() const { return points.at(worst); }
};

// The oblivious adversary's best stopping point: for every prefix length,
// OPT(prefix) / E[net on prefix], estimated from the same trials.
PrefixProfile worst_prefix_ratio(AlgorithmId algorithm, const Instance& instance, double f,
                                 std::size_t trials, std::uint64_t seed,
                                 std::optional<double> r = std::nullopt);

// Bound on OPT / E[net] that the theory guarantees for the algorithm on an
// arbitrary instance, or NaN.
double theoretical_bound(AlgorithmId algorithm, double f, std::optional<double> r);

double safe_ratio(double opt, double mean);

}  // namespace buyback

#endif  // BUYBACK_HARNESS_H_
