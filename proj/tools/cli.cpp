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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "buyback/harness.h"
#include "buyback/io.h"
#include "buyback/lower_bound.h"
#include "buyback/ratio.h"
#include "buyback/verification.h"

namespace buyback::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double f = 1.0;
  std::optional<double> r;
  std::uint64_t seed = 1;
  std::size_t trials = 10000;
  std::string instance_path;
  std::string generator;
  std::string out_path;
  std::string format = "csv";
  std::vector<double> horizons;
  std::size_t k_max = 10000;
  std::string algorithm = "randalg";
  std::string prefix_out;
  std::string trace_out;
  std::string trace_path;
};

std::string num(double x) { return fmt::format("{}", x); }

json json_num(double x) {
  if (std::isfinite(x)) return x;
  return num(x);  // "inf" / "nan" as strings; JSON has no literal for them
}

void require_factor(double f) {
  if (!(f >= 0.0) || !std::isfinite(f)) {
    throw UsageError(fmt::format("--f must be a finite number >= 0, got {}", f));
  }
}

void require_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw UsageError(fmt::format("--format must be csv or json, got {}", format));
  }
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("cannot write {}", path));
  file << text;
}

// Rows of name/value strings rendered as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  std::string render(const std::string& format) const {
    if (format == "json") {
      json doc = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
        doc.push_back(std::move(obj));
      }
      return doc.dump(2) + "\n";
    }
    std::string text;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      text += (c ? "," : "") + columns[c];
    }
    text += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        const json& cell = row[c];
        std::string rendered;
        if (cell.is_string()) {
          rendered = cell.get<std::string>();
          if (rendered.find_first_of(",\"\n") != std::string::npos) {
            std::string quoted = "\"";
            for (char ch : rendered) {
              if (ch == '"') quoted += '"';
              quoted += ch;
            }
            rendered = quoted + "\"";
          }
        } else if (cell.is_number_float()) {
          rendered = num(cell.get<double>());
        } else {
          rendered = cell.dump();
        }
        text += (c ? "," : "") + rendered;
      }
      text += "\n";
    }
    return text;
  }
};

int cmd_ratio(const Options& o, std::ostream& out) {
  require_factor(o.f);
  require_format(o.format);
  const RatioConstants k = ratio_constants(o.f);
  // At f = 0 the minimizing base degenerates to its infimum 1, where both
  // ratios take their limiting value 1.
  const double at_r = k.degenerate ? 1.0 : ratio_formula(k.r_star, o.f);
  const double gma = k.degenerate ? 1.0 : gma_ratio_bound(k.r_star, o.f);
  Table t{{"f", "c_star", "r_star", "ratio_at_r_star", "gma_bound_at_r_star", "degenerate"}, {}};
  t.rows.push_back({o.f, k.c_star, k.r_star, at_r, gma, k.degenerate});
  emit(t.render(o.format), o.out_path, out);
  return kSuccess;
}

Instance load_input(const Options& o, std::string& id) {
  if (o.instance_path.empty() == o.generator.empty()) {
    throw UsageError("exactly one of --instance or --generator is required");
  }
  if (!o.instance_path.empty()) {
    id = std::filesystem::path(o.instance_path).filename().string();
    return load_instance(o.instance_path);
  }
  const GeneratorSpec spec = parse_generator(o.generator, o.seed);
  id = describe(spec);
  return generate(spec);
}

int cmd_simulate(const Options& o, std::ostream& out) {
  require_factor(o.f);
  require_format(o.format);
  if (o.trials == 0) throw UsageError("--trials must be >= 1");
  if (o.r && !(*o.r > 1.0 + o.f)) {
    throw UsageError(fmt::format("--r must exceed 1 + f = {}", 1.0 + o.f));
  }
  const AlgorithmId algorithm = parse_algorithm(o.algorithm);
  std::string id;
  const Instance instance = load_input(o, id);

  const RatioReport rep =
      estimate_expected_payoff(algorithm, instance, o.f, o.trials, o.seed, o.r, id);
  Table t{{"algorithm", "instance", "f", "trials", "mean", "stderr", "opt", "ratio", "bound",
           "seed"},
          {}};
  t.rows.push_back({rep.algorithm, rep.instance, json_num(rep.f), rep.trials,
                    json_num(rep.mean_net), json_num(rep.stderr_net), json_num(rep.opt),
                    json_num(rep.empirical_ratio), json_num(rep.theoretical_bound), rep.seed});
  emit(t.render(o.format), o.out_path, out);

  if (!o.prefix_out.empty()) {
    const PrefixProfile profile =
        worst_prefix_ratio(algorithm, instance, o.f, o.trials, o.seed, o.r);
    Table p{{"prefix", "opt", "mean", "stderr", "ratio", "ratio_stderr", "worst"}, {}};
    for (std::size_t i = 0; i < profile.points.size(); ++i) {
      const PrefixPoint& pt = profile.points[i];
      p.rows.push_back({pt.prefix, json_num(pt.opt), json_num(pt.mean_net),
                        json_num(pt.stderr_net), json_num(pt.ratio), json_num(pt.ratio_stderr),
                        i == profile.worst});
    }
    emit(p.render(o.format), o.prefix_out, out);
  }
  if (!o.trace_out.empty()) {
    const Trace trace = run_algorithm(algorithm, instance, o.f, o.r, derive_seed(o.seed, 0));
    emit(trace_to_jsonl(trace), o.trace_out, out);
  }
  return kSuccess;
}

int cmd_lowerbound(const Options& o, std::ostream& out) {
  require_factor(o.f);
  require_format(o.format);
  if (o.k_max < 2) throw UsageError("--kmax must be >= 2");
  std::vector<double> horizons = o.horizons;
  if (horizons.empty()) {
    for (int m = 2; m <= 20; m += 2) horizons.push_back(std::exp(static_cast<double>(m)));
  }
  const double c = competitive_ratio(o.f);
  Table t{{"y", "k", "w", "P", "V", "bound_c", "c_star_gap"}, {}};
  for (double y : horizons) {
    if (!(y > 1.0)) throw UsageError(fmt::format("--y values must exceed 1, got {}", y));
    const GeometricBound b = best_geometric(o.f, y, o.k_max);
    t.rows.push_back({y, b.strategy.count, b.strategy.ratio, b.payoff, b.prophet, b.bound,
                      c - b.bound});
  }
  emit(t.render(o.format), o.out_path, out);
  return kSuccess;
}

int cmd_verify(const Options& o, std::ostream& out) {
  VerifyOptions options;
  options.seed = o.seed;
  bool ok = true;
  for (const SuiteResult& s : run_all_suites(options)) {
    out << fmt::format("[{}] {:<22} checks={:<7} failures={} max_dev={:.3g}\n",
                       s.passed() ? "PASS" : "FAIL", s.name, s.checks, s.failures,
                       s.max_deviation);
    if (!s.passed()) {
      out << "       first failure: " << s.first_failure << "\n";
      ok = false;
    }
  }
  out << (ok ? "all suites passed\n" : "verification FAILED\n");
  return ok ? kSuccess : kVerificationFailure;
}

int cmd_report(const Options& o, std::ostream& out) {
  require_factor(o.f);
  require_format(o.format);
  if (o.instance_path.empty() || o.trace_path.empty()) {
    throw UsageError("report needs --instance and --trace");
  }
  const Instance instance = load_instance(o.instance_path);
  std::ifstream in(o.trace_path);
  if (!in) throw InputFormatError(fmt::format("cannot open {}", o.trace_path), 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Trace trace = parse_trace_jsonl(buffer.str());
  if (trace.events.size() != instance.size()) {
    throw InputFormatError(fmt::format("trace has {} events but the instance has {} elements",
                                       trace.events.size(), instance.size()),
                           0);
  }
  if (auto violation = validate_trace(trace, instance.oracle())) {
    throw InputFormatError("trace is infeasible: " + *violation, 0);
  }
  const PayoffLedger ledger = payoff(trace, instance.values(), o.f);
  Table t{{"f", "sold", "bought_back", "gross", "penalty", "net"}, {}};
  t.rows.push_back({o.f, trace.final_set.size(), trace.buyback_set.size(), ledger.gross,
                    ledger.penalty, ledger.net});
  emit(t.render(o.format), o.out_path, out);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online matroid buyback: algorithms, ratios and lower-bound experiments",
               "buyback"};
  app.require_subcommand(1);
  Options o;

  auto* ratio = app.add_subcommand("ratio", "Optimal competitive ratio and rounding base");
  ratio->add_option("--f", o.f, "Buyback factor f >= 0");
  ratio->add_option("--out", o.out_path, "Output file (default stdout)");
  ratio->add_option("--format", o.format, "csv or json");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo payoff and ratio estimate");
  simulate->add_option("--algorithm", o.algorithm, "gma or randalg");
  simulate->add_option("--f", o.f, "Buyback factor f >= 0");
  simulate->add_option("--r", o.r, "Rounding base r > 1 + f (default: optimal)");
  simulate->add_option("--seed", o.seed, "Master seed");
  simulate->add_option("--trials", o.trials, "Number of trials");
  simulate->add_option("--instance", o.instance_path, "Instance JSON file");
  simulate->add_option("--generator", o.generator,
                       "Generator, e.g. geometric:base=2,length=5 or "
                       "random:kind=graphic,n=30,values=uniform");
  simulate->add_option("--out", o.out_path, "Report file (default stdout)");
  simulate->add_option("--format", o.format, "csv or json");
  simulate->add_option("--prefix-out", o.prefix_out, "Write the per-prefix ratio profile here");
  simulate->add_option("--trace-out", o.trace_out, "Write the trace of trial 0 here (JSON lines)");

  auto* lowerbound = app.add_subcommand("lowerbound", "Geometric lower-bound sweep over y");
  lowerbound->add_option("--f", o.f, "Buyback factor f >= 0");
  lowerbound->add_option("--y", o.horizons, "Horizon y > 1 (repeatable; default e^2..e^20)");
  lowerbound->add_option("--kmax", o.k_max, "Largest mark count considered");
  lowerbound->add_option("--out", o.out_path, "Output file (default stdout)");
  lowerbound->add_option("--format", o.format, "csv or json");

  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--seed", o.seed, "Master seed");

  auto* report = app.add_subcommand("report", "Payoff ledger of a recorded trace");
  report->add_option("--instance", o.instance_path, "Instance JSON file")->required();
  report->add_option("--trace", o.trace_path, "Trace JSON-lines file")->required();
  report->add_option("--f", o.f, "Buyback factor f >= 0");
  report->add_option("--out", o.out_path, "Output file (default stdout)");
  report->add_option("--format", o.format, "csv or json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run `buyback --help` for usage\n";
    return kUsageError;
  }

  try {
    if (ratio->parsed()) return cmd_ratio(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (lowerbound->parsed()) return cmd_lowerbound(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (report->parsed()) return cmd_report(o, out);
  } catch (const InputFormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputFormatError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace buyback::cli
