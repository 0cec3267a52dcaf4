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

// File formats. Vertex indices on disk are 0-based.
//
// Instance (JSON):
//   {"n": 3, "a": [..n reals..],
//    "w": [..n positive reals..] | {"variant": "degree" | "incidence", "beta": b},
//    "functions": [{"kind": "graph_edge" | "undirected_hyperedge" |
//                            "directed_hyperedge" | "cardinality",
//                   "weight": 1.0, "members": [...],
//                   "head": [...], "tail": [...],   // directed only
//                   "theta": 0.5}]}                 // cardinality only
//   "degree" expands to beta * sum_r max F_r^2 (the weighted degree for
//   cut functions), "incidence" to beta * #{r : i in S_r}.
//
// Hypergraph (JSON):
//   {"n": 4, "edges": [{"weight": 1.0, "members": [...],
//                        "head": [...], "tail": [...]}],   // head/tail optional
//    "truth": [1, -1, ...]}                                // optional
//
// Trace (CSV): iteration,elapsed_seconds,dual_objective,duality_gap with
// reals printed to 17 significant digits.
//
// Vectors: one real per line.

#ifndef QDSFM_IO_HPP_
#define QDSFM_IO_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdsfm/dual_solvers.hpp"
#include "qdsfm/hypergraph.hpp"
#include "qdsfm/submodular.hpp"

namespace qdsfm {

// Malformed or invalid input; the message names the offending key path
// (e.g. "functions[2].members") or line.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ProblemInstance instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(const ProblemInstance& instance);
ProblemInstance parse_instance(const std::string& path);
void write_instance(const ProblemInstance& instance, const std::string& path);

Hypergraph hypergraph_from_json(const nlohmann::json& doc);
nlohmann::json hypergraph_to_json(const Hypergraph& hg);
Hypergraph parse_hypergraph(const std::string& path);
void write_hypergraph(const Hypergraph& hg, const std::string& path);

// Throws std::invalid_argument on empty rows, std::runtime_error on IO failure.
void write_trace(const std::vector<TraceRow>& rows, const std::string& path);
std::vector<TraceRow> read_trace(const std::string& path);

void write_vector(const Vector& values, const std::string& path);
Vector read_vector(const std::string& path);

// %.17g rendering used by every text writer.
std::string format_real(double value);

}  // namespace qdsfm

#endif  // QDSFM_IO_HPP_
