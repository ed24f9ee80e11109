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

#include "buyback/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "buyback/numeric.h"
#include "buyback/random.h"
#include "buyback/ratio.h"

namespace buyback {
namespace {

constexpr std::size_t kTrialsPerBlock = 512;
constexpr std::size_t kMaxExplicitGenerated = 12;

double draw_value(ValueDistribution dist, Rng& rng) {
  switch (dist) {
    case ValueDistribution::kUniform:
      return 1.0 - uniform01(rng);
    case ValueDistribution::kLogUniform:
      return std::exp(uniform01(rng) * std::log(1000.0));
  }
  return 1.0;
}

MatroidOracle random_oracle(MatroidKind kind, std::size_t n, Rng& rng) {
  switch (kind) {
    case MatroidKind::kUniform:
      return MatroidOracle::uniform(n, uniform_int(rng, 1, std::max<std::size_t>(1, n / 2)));
    case MatroidKind::kPartition: {
      const std::size_t parts = uniform_int(rng, 1, std::max<std::size_t>(1, n / 3));
      std::vector<std::size_t> part_of(n);
      std::vector<std::size_t> capacity(parts);
      for (auto& p : part_of) p = uniform_int(rng, 0, parts - 1);
      for (auto& c : capacity) c = uniform_int(rng, 1, 3);
      return MatroidOracle::partition(std::move(part_of), std::move(capacity));
    }
    case MatroidKind::kGraphic: {
      const std::size_t vertices = std::max<std::size_t>(3, n / 3 + 2);
      std::vector<GraphicMatroid::Edge> edges(n);
      for (auto& [a, b] : edges) {
        a = uniform_int(rng, 0, vertices - 1);
        do {
          b = uniform_int(rng, 0, vertices - 1);
        } while (b == a);
      }
      return MatroidOracle::graphic(std::move(edges));
    }
    case MatroidKind::kExplicit: {
      if (n > kMaxExplicitGenerated) {
        throw ConfigError(fmt::format("explicit generator supports n <= {}, got {}",
                                      kMaxExplicitGenerated, n));
      }
      const auto base_kind = static_cast<MatroidKind>(uniform_int(rng, 0, 2));
      return MatroidOracle::enumerate(random_oracle(base_kind, n, rng));
    }
  }
  throw ConfigError("unknown matroid kind");
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view body) {
  std::map<std::string, std::string, std::less<>> out;
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    body = comma == std::string_view::npos ? std::string_view() : body.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ConfigError(fmt::format("generator parameter \"{}\" is not key=value", item));
    }
    out.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
  }
  return out;
}

template <typename T>
T parse_number(const std::map<std::string, std::string, std::less<>>& params,
               std::string_view key, std::optional<T> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return *fallback;
    throw ConfigError(fmt::format("generator parameter \"{}\" is required", key));
  }
  const std::string& text = it->second;
  T value{};
  if constexpr (std::is_floating_point_v<T>) {
    std::size_t used = 0;
    try {
      value = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty()) {
      throw ConfigError(fmt::format("generator parameter {}={} is not a number", key, text));
    }
  } else {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw ConfigError(fmt::format("generator parameter {}={} is not an integer", key, text));
    }
  }
  return value;
}

// Running moments of a batch of trials, shifted by the first trial's value
// so that constant samples give exactly zero variance.
struct Moments {
  CompensatedSum sum;
  CompensatedSum sum_sq;

  void add(double shifted) {
    sum.add(shifted);
    sum_sq.add(shifted * shifted);
  }
  void add(const Moments& other) {
    sum.add(other.sum);
    sum_sq.add(other.sum_sq);
  }
};

struct Estimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

Estimate finish(const Moments& m, double shift, std::size_t n) {
  const double count = static_cast<double>(n);
  const double s1 = m.sum.value();
  const double s2 = m.sum_sq.value();
  Estimate e;
  e.mean = shift + s1 / count;
  if (n > 1) {
    const double var = std::max(0.0, (s2 - s1 * s1 / count) / (count - 1.0));
    e.stderr_mean = std::sqrt(var / count);
  }
  return e;
}

// Runs `trials` independent trials and returns per-series estimates. A trial
// produces one sample per series (one series for the full-run net, or one per
// prefix).
template <typename SampleFn>
std::vector<Estimate> monte_carlo(std::size_t series, std::size_t trials, std::uint64_t seed,
                                  SampleFn sample) {
  if (trials == 0) throw ConfigError("trials must be >= 1");
  std::vector<double> shift = sample(derive_seed(seed, 0));
  if (shift.size() != series) throw std::logic_error("sample size mismatch");

  const std::size_t blocks = (trials + kTrialsPerBlock - 1) / kTrialsPerBlock;
  std::vector<std::vector<Moments>> partial(blocks, std::vector<Moments>(series));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t b = next++; b < blocks; b = next++) {
      const std::size_t begin = b * kTrialsPerBlock;
      const std::size_t end = std::min(trials, begin + kTrialsPerBlock);
      for (std::size_t t = begin; t < end; ++t) {
        const std::vector<double> x = t == 0 ? shift : sample(derive_seed(seed, t));
        for (std::size_t s = 0; s < series; ++s) partial[b][s].add(x[s] - shift[s]);
      }
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, blocks);
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  std::vector<Estimate> out(series);
  for (std::size_t s = 0; s < series; ++s) {
    Moments total;
    for (std::size_t b = 0; b < blocks; ++b) total.add(partial[b][s]);
    out[s] = finish(total, shift[s], trials);
  }
  return out;
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  Rng rng(spec.seed);
  if (const auto* g = std::get_if<GeometricStream>(&spec.kind)) {
    if (!(g->base > 1.0) || !std::isfinite(g->base)) {
      throw ConfigError(fmt::format("geometric base {} must exceed 1", g->base));
    }
    std::vector<double> values(g->length);
    for (std::size_t k = 0; k < g->length; ++k) {
      values[k] = std::pow(g->base, static_cast<double>(k));
    }
    return Instance(std::move(values), MatroidOracle::uniform(g->length, 1));
  }
  if (const auto* s = std::get_if<RStructuredRandom>(&spec.kind)) {
    if (!(s->r > 1.0) || !std::isfinite(s->r)) {
      throw ConfigError(fmt::format("r = {} must exceed 1", s->r));
    }
    if (s->rank == 0) throw ConfigError("rank must be >= 1");
    const std::size_t top = s->max_exponent == 0 ? s->n : s->max_exponent;
    std::vector<double> values(s->n);
    for (auto& v : values) v = std::pow(s->r, static_cast<double>(uniform_int(rng, 0, top)));
    return Instance(std::move(values), MatroidOracle::uniform(s->n, s->rank));
  }
  const auto& m = std::get<RandomMatroid>(spec.kind);
  if (m.n == 0) throw ConfigError("n must be >= 1");
  MatroidOracle oracle = random_oracle(m.kind, m.n, rng);
  std::vector<double> values(m.n);
  for (auto& v : values) v = draw_value(m.values, rng);
  return Instance(std::move(values), std::move(oracle));
}

GeneratorSpec parse_generator(std::string_view text, std::uint64_t default_seed) {
  const std::size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const auto params = parse_params(colon == std::string_view::npos ? std::string_view()
                                                                   : text.substr(colon + 1));
  GeneratorSpec spec;
  spec.seed = parse_number<std::uint64_t>(params, "seed", default_seed);
  if (name == "geometric") {
    spec.kind = GeometricStream{parse_number<double>(params, "base"),
                                parse_number<std::size_t>(params, "length")};
  } else if (name == "rstructured") {
    spec.kind = RStructuredRandom{parse_number<double>(params, "r"),
                                  parse_number<std::size_t>(params, "rank"),
                                  parse_number<std::size_t>(params, "n"),
                                  parse_number<std::size_t>(params, "max_exponent", 0)};
  } else if (name == "random") {
    RandomMatroid m;
    auto kind = params.find("kind");
    const std::string k = kind == params.end() ? "uniform" : kind->second;
    if (k == "uniform") {
      m.kind = MatroidKind::kUniform;
    } else if (k == "partition") {
      m.kind = MatroidKind::kPartition;
    } else if (k == "graphic") {
      m.kind = MatroidKind::kGraphic;
    } else if (k == "explicit") {
      m.kind = MatroidKind::kExplicit;
    } else {
      throw ConfigError(fmt::format("unknown matroid kind \"{}\"", k));
    }
    m.n = parse_number<std::size_t>(params, "n");
    auto values = params.find("values");
    const std::string v = values == params.end() ? "uniform" : values->second;
    if (v == "uniform") {
      m.values = ValueDistribution::kUniform;
    } else if (v == "loguniform") {
      m.values = ValueDistribution::kLogUniform;
    } else {
      throw ConfigError(fmt::format("unknown value distribution \"{}\"", v));
    }
    spec.kind = m;
  } else {
    throw ConfigError(fmt::format("unknown generator \"{}\"", name));
  }
  return spec;
}

std::string describe(const GeneratorSpec& spec) {
  if (const auto* g = std::get_if<GeometricStream>(&spec.kind)) {
    return fmt::format("geometric(base={},length={})", g->base, g->length);
  }
  if (const auto* s = std::get_if<RStructuredRandom>(&spec.kind)) {
    return fmt::format("rstructured(r={},rank={},n={},seed={})", s->r, s->rank, s->n, spec.seed);
  }
  const auto& m = std::get<RandomMatroid>(spec.kind);
  return fmt::format("random(kind={},n={},values={},seed={})", to_string(m.kind), m.n,
                     m.values == ValueDistribution::kUniform ? "uniform" : "loguniform",
                     spec.seed);
}

std::string_view to_string(AlgorithmId id) {
  return id == AlgorithmId::kGreedy ? "gma" : "randalg";
}

AlgorithmId parse_algorithm(std::string_view name) {
  if (name == "gma") return AlgorithmId::kGreedy;
  if (name == "randalg") return AlgorithmId::kRandomized;
  throw ConfigError(fmt::format("unknown algorithm \"{}\" (expected gma or randalg)", name));
}

Trace run_algorithm(AlgorithmId id, const Instance& instance, double f, std::optional<double> r,
                    std::uint64_t seed) {
  if (id == AlgorithmId::kGreedy) return run_gma(instance, f);
  Rng rng(seed);
  return run_randalg(instance, f, r, rng);
}

double theoretical_bound(AlgorithmId algorithm, double f, std::optional<double> r) {
  if (algorithm == AlgorithmId::kGreedy) {
    return f == 0.0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  }
  const std::optional<double> base = resolve_rounding_base(f, r);
  return base ? ratio_formula(*base, f) : 1.0;
}

double safe_ratio(double opt, double mean) {
  if (opt == 0.0 && mean == 0.0) return 1.0;
  if (!(mean > 0.0)) return std::numeric_limits<double>::infinity();
  return opt / mean;
}

RatioReport estimate_expected_payoff(AlgorithmId algorithm, const Instance& instance, double f,
                                     std::size_t trials, std::uint64_t seed,
                                     std::optional<double> r, std::string instance_id) {
  // Validates f and r up front.
  const double bound = theoretical_bound(algorithm, f, r);
  const auto estimates = monte_carlo(1, trials, seed, [&](std::uint64_t trial_seed) {
    const Trace trace = run_algorithm(algorithm, instance, f, r, trial_seed);
    return std::vector<double>{payoff(trace, instance.values(), f).net};
  });

  RatioReport report;
  report.algorithm = std::string(to_string(algorithm));
  report.instance = std::move(instance_id);
  report.f = f;
  report.trials = trials;
  report.mean_net = estimates[0].mean;
  report.stderr_net = estimates[0].stderr_mean;
  report.opt = max_weight_basis(instance).value;
  report.empirical_ratio = safe_ratio(report.opt, report.mean_net);
  report.theoretical_bound = bound;
  report.seed = seed;
  return report;
}

PrefixProfile worst_prefix_ratio(AlgorithmId algorithm, const Instance& instance, double f,
                                 std::size_t trials, std::uint64_t seed,
                                 std::optional<double> r) {
  theoretical_bound(algorithm, f, r);
  const std::size_t n = instance.size();
  PrefixProfile profile;
  if (n == 0) return profile;

  const auto estimates = monte_carlo(n, trials, seed, [&](std::uint64_t trial_seed) {
    const Trace trace = run_algorithm(algorithm, instance, f, r, trial_seed);
    return prefix_nets(trace, instance.values(), f);
  });

  profile.points.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    PrefixPoint& point = profile.points[p];
    point.prefix = p + 1;
    point.opt = max_weight_basis(instance.oracle(), instance.values().first(p + 1)).value;
    point.mean_net = estimates[p].mean;
    point.stderr_net = estimates[p].stderr_mean;
    point.ratio = safe_ratio(point.opt, point.mean_net);
    point.ratio_stderr = point.mean_net > 0.0
                             ? point.opt * point.stderr_net / (point.mean_net * point.mean_net)
                             : std::numeric_limits<double>::infinity();
    if (point.ratio > profile.points[profile.worst].ratio) profile.worst = p;
  }
  return profile;
}

}  // namespace buyback
