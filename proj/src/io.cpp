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

#include "buyback/io.h"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace buyback {
namespace {

using nlohmann::json;

// Line and column of a byte offset as reported by the JSON parser.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json parse_json(std::string_view text, std::size_t line_offset = 0) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = locate(text, e.byte);
    throw InputFormatError(
        fmt::format("line {}, column {}: {}", line + line_offset, column, e.what()),
        line + line_offset);
  }
}

// Schema violation at a JSON path such as "matroid.edges[2]"; parse_instance
// turns it into a line-numbered InputFormatError.
struct SchemaError {
  std::string path;
  std::string message;
};

[[noreturn]] void fail(const std::string& path, const std::string& message,
                       std::size_t line = 0) {
  if (line > 0) throw InputFormatError(fmt::format("line {}: {}: {}", line, path, message), line);
  throw SchemaError{path, message};
}

// Minimal scanner over syntactically valid JSON text, used to find where a
// path points.
class PathLocator {
 public:
  explicit PathLocator(std::string_view text) : text_(text) {}

  // Byte offset of the value at `path`, or of the deepest enclosing value that
  // exists.
  std::size_t find(std::string_view path) {
    pos_ = 0;
    skip_ws();
    std::size_t found = pos_;
    std::size_t i = path.starts_with("$") ? 1 : 0;
    while (i < path.size()) {
      if (path[i] == '.') {
        ++i;
        continue;
      }
      if (path[i] == '[') {
        const std::size_t close = path.find(']', i);
        const std::size_t index = std::stoul(std::string(path.substr(i + 1, close - i - 1)));
        i = close + 1;
        if (!enter_index(index)) break;
      } else {
        const std::size_t stop = std::min(path.find_first_of(".[", i), path.size());
        const std::string_view key = path.substr(i, stop - i);
        i = stop;
        if (!enter_key(key)) break;
      }
      found = pos_;
    }
    return found;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view read_string() {
    const std::size_t begin = ++pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') pos_ += text_[pos_] == '\\' ? 2 : 1;
    return text_.substr(begin, (pos_++) - begin);
  }

  void skip_value() {
    skip_ws();
    const char c = peek();
    if (c == '"') {
      read_string();
    } else if (c == '{' || c == '[') {
      const char close = c == '{' ? '}' : ']';
      ++pos_;
      skip_ws();
      while (peek() != close && pos_ < text_.size()) {
        if (c == '{') {
          read_string();
          skip_ws();
          ++pos_;  // ':'
        }
        skip_value();
        skip_ws();
        if (peek() == ',') ++pos_;
        skip_ws();
      }
      ++pos_;
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  bool enter_key(std::string_view key) {
    const std::size_t start = pos_;
    if (peek() != '{') return false;
    ++pos_;
    skip_ws();
    while (peek() == '"') {
      const std::string_view name = read_string();
      skip_ws();
      ++pos_;  // ':'
      skip_ws();
      if (name == key) return true;
      skip_value();
      skip_ws();
      if (peek() == ',') ++pos_;
      skip_ws();
    }
    pos_ = start;
    return false;
  }

  bool enter_index(std::size_t index) {
    const std::size_t start = pos_;
    if (peek() != '[') return false;
    ++pos_;
    skip_ws();
    for (std::size_t k = 0; k < index; ++k) {
      if (peek() == ']') {
        pos_ = start;
        return false;
      }
      skip_value();
      skip_ws();
      if (peek() == ',') ++pos_;
      skip_ws();
    }
    if (peek() == ']') {
      pos_ = start;
      return false;
    }
    return true;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const json& field(const json& object, const char* name, const std::string& path) {
  if (!object.is_object()) fail(path, "expected an object");
  auto it = object.find(name);
  if (it == object.end()) fail(path, fmt::format("missing field \"{}\"", name));
  return *it;
}

std::size_t as_index(const json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    fail(path, "expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

std::vector<std::size_t> index_array(const json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "expected an array");
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < value.size(); ++k) {
    out.push_back(as_index(value[k], fmt::format("{}[{}]", path, k)));
  }
  return out;
}

MatroidOracle parse_matroid(const json& m, std::size_t n) {
  const std::string path = "matroid";
  const json& kind = field(m, "kind", path);
  if (!kind.is_string()) fail(path + ".kind", "expected a string");
  const std::string name = kind.get<std::string>();

  if (name == "uniform") {
    return MatroidOracle::uniform(n, as_index(field(m, "rank", path), path + ".rank"));
  }
  if (name == "partition") {
    auto parts = index_array(field(m, "parts", path), path + ".parts");
    auto capacities = index_array(field(m, "capacities", path), path + ".capacities");
    if (parts.size() != n) {
      fail(path + ".parts", fmt::format("expected {} entries (one per value), got {}", n,
                                        parts.size()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (parts[i] >= capacities.size()) {
        fail(fmt::format("{}.parts[{}]", path, i),
             fmt::format("part {} has no capacity entry", parts[i]));
      }
    }
    return MatroidOracle::partition(std::move(parts), std::move(capacities));
  }
  if (name == "graphic") {
    const json& edges = field(m, "edges", path);
    if (!edges.is_array()) fail(path + ".edges", "expected an array");
    if (edges.size() != n) {
      fail(path + ".edges", fmt::format("expected {} edges (one per value), got {}", n,
                                        edges.size()));
    }
    std::vector<GraphicMatroid::Edge> out;
    for (std::size_t i = 0; i < n; ++i) {
      const std::string at = fmt::format("{}.edges[{}]", path, i);
      auto ends = index_array(edges[i], at);
      if (ends.size() != 2) fail(at, "expected a pair of vertex ids");
      out.emplace_back(ends[0], ends[1]);
    }
    return MatroidOracle::graphic(std::move(out));
  }
  if (name == "explicit") {
    if (n > MatroidOracle::kMaxExplicitGroundSize) {
      fail(path, fmt::format("explicit matroids support at most {} elements",
                             MatroidOracle::kMaxExplicitGroundSize));
    }
    const json& sets = field(m, "independent_sets", path);
    if (!sets.is_array()) fail(path + ".independent_sets", "expected an array");
    std::vector<ElementSet> family;
    for (std::size_t k = 0; k < sets.size(); ++k) {
      const std::string at = fmt::format("{}.independent_sets[{}]", path, k);
      ElementSet set = index_array(sets[k], at);
      for (Element e : set) {
        if (e >= n) fail(at, fmt::format("element {} outside ground set of size {}", e, n));
      }
      family.push_back(std::move(set));
    }
    MatroidOracle oracle = MatroidOracle::explicit_family(n, family);
    if (auto violation = check_matroid_axioms(oracle)) {
      fail(path + ".independent_sets", "not a matroid: " + *violation);
    }
    return oracle;
  }
  fail(path + ".kind", fmt::format("unknown matroid kind \"{}\"", name));
}

json matroid_to_json(const MatroidOracle& oracle) {
  json m;
  m["kind"] = std::string(to_string(oracle.kind()));
  if (const auto* u = oracle.as_uniform()) {
    m["rank"] = u->rank;
  } else if (const auto* p = oracle.as_partition()) {
    m["parts"] = p->part_of;
    m["capacities"] = p->capacity;
  } else if (const auto* g = oracle.as_graphic()) {
    json edges = json::array();
    for (const auto& [a, b] : g->edges) edges.push_back({a, b});
    m["edges"] = std::move(edges);
  } else if (const auto* x = oracle.as_explicit()) {
    json sets = json::array();
    for (std::uint32_t mask : x->independent_masks) {
      if (mask == 0) continue;
      json set = json::array();
      for (std::size_t e = 0; e < oracle.ground_size(); ++e) {
        if (mask & (std::uint32_t{1} << e)) set.push_back(e);
      }
      sets.push_back(std::move(set));
    }
    m["independent_sets"] = std::move(sets);
  }
  return m;
}

Instance parse_document(const json& doc) {
  if (!doc.is_object()) fail("$", "expected a JSON object");
  const json& values = field(doc, "values", "$");
  if (!values.is_array()) fail("values", "expected an array of numbers");
  std::vector<double> v;
  v.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].is_number()) fail(fmt::format("values[{}]", i), "expected a number");
    const double x = values[i].get<double>();
    if (!(x >= 0.0) || !std::isfinite(x)) {
      fail(fmt::format("values[{}]", i), fmt::format("bid {} must be finite and >= 0", x));
    }
    v.push_back(x);
  }
  const json& m = field(doc, "matroid", "$");
  try {
    MatroidOracle oracle = parse_matroid(m, v.size());
    return Instance(std::move(v), std::move(oracle));
  } catch (const std::invalid_argument& e) {
    fail("matroid", e.what());
  }
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  try {
    return parse_document(doc);
  } catch (const SchemaError& e) {
    const std::size_t line = locate(text, PathLocator(text).find(e.path) + 1).first;
    throw InputFormatError(fmt::format("line {}: {}: {}", line, e.path, e.message), line);
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputFormatError(fmt::format("cannot open {}", path.string()), 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

std::string instance_to_json(const Instance& instance) {
  json doc;
  doc["matroid"] = matroid_to_json(instance.oracle());
  doc["values"] = std::vector<double>(instance.values().begin(), instance.values().end());
  return doc.dump() + "\n";
}

std::string trace_to_jsonl(const Trace& trace) {
  std::string out;
  for (const TraceEvent& ev : trace.events) {
    out += fmt::format("{{\"i\":{},\"decision\":\"{}\",\"buyback\":{}}}\n", ev.element,
                       to_string(ev.decision),
                       ev.buyback ? fmt::format("{}", *ev.buyback) : std::string("null"));
  }
  return out;
}

Trace parse_trace_jsonl(std::string_view text) {
  Trace trace;
  ElementSet held;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const json ev = parse_json(line, line_no - 1);
    if (!ev.is_object()) fail("$", "expected an event object", line_no);
    auto get = [&](const char* name) -> const json& {
      auto it = ev.find(name);
      if (it == ev.end()) fail("$", fmt::format("missing field \"{}\"", name), line_no);
      return *it;
    };
    const json& i = get("i");
    const json& decision = get("decision");
    const json& buyback = get("buyback");
    if (!i.is_number_integer() || i.get<long long>() < 0) {
      fail("i", "expected a non-negative integer", line_no);
    }
    TraceEvent out;
    out.element = i.get<std::size_t>();
    const std::string d = decision.is_string() ? decision.get<std::string>() : std::string();
    if (d == "sell") {
      out.decision = Decision::kSell;
    } else if (d == "swap") {
      out.decision = Decision::kSwap;
    } else if (d == "reject") {
      out.decision = Decision::kReject;
    } else {
      fail("decision", "expected \"sell\", \"swap\" or \"reject\"", line_no);
    }
    if (!buyback.is_null()) {
      if (!buyback.is_number_integer() || buyback.get<long long>() < 0) {
        fail("buyback", "expected null or a non-negative integer", line_no);
      }
      out.buyback = buyback.get<std::size_t>();
    }
    if ((out.decision == Decision::kSwap) != (out.buyback.has_value()) &&
        out.decision != Decision::kReject) {
      fail("buyback", fmt::format("inconsistent with decision \"{}\"", d), line_no);
    }
    if (out.buyback) {
      auto it = std::find(held.begin(), held.end(), *out.buyback);
      if (it == held.end()) {
        fail("buyback", fmt::format("element {} is not held at this point", *out.buyback),
             line_no);
      }
      held.erase(it);
      trace.buyback_set.push_back(*out.buyback);
    }
    if (out.decision != Decision::kReject) held.push_back(out.element);
    trace.events.push_back(out);
  }
  std::sort(held.begin(), held.end());
  std::sort(trace.buyback_set.begin(), trace.buyback_set.end());
  trace.final_set = std::move(held);
  return trace;
}

}  // namespace buyback
