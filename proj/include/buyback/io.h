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

#ifndef BUYBACK_IO_H_
#define BUYBACK_IO_H_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "buyback/matroid.h"
#include "buyback/online.h"

namespace buyback {

// Malformed input file. what() carries a "line L, column C: ..." diagnostic
// when the problem can be located in the text, otherwise the JSON path of
// the offending field.
class InputFormatError : public std::runtime_error {
 public:
  InputFormatError(const std::string& message, std::size_t line)
      : std::runtime_error(message), line_(line) {}

  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Instance files:
//
//   {"matroid": {"kind": "uniform", "rank": 2}, "values": [1, 4, 16]}
//   {"matroid": {"kind": "partition", "parts": [0, 0, 1], "capacities": [1, 2]}, ...}
//   {"matroid": {"kind": "graphic", "edges": [[0, 1], [1, 2], [2, 0]]}, ...}
//   {"matroid": {"kind": "explicit", "independent_sets": [[0], [1], [0, 1]]}, ...}
//
// Element i of "values" is arrival i. "parts" and "edges" hold one entry per
// element. Explicit families must satisfy the matroid axioms.
Instance parse_instance(std::string_view text);
Instance load_instance(const std::filesystem::path& path);
std::string instance_to_json(const Instance& instance);

// Trace files hold one event per line:
//   {"i": 3, "decision": "swap", "buyback": 1}
std::string trace_to_jsonl(const Trace& trace);
Trace parse_trace_jsonl(std::string_view text);

}  // namespace buyback

#endif  // BUYBACK_IO_H_
