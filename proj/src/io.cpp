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

#include "qdsfm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qdsfm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw ParseError(key + ": " + message);
}

const json& field(const json& obj, const char* name, const std::string& key) {
  if (!obj.is_object()) fail(key, "expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) fail(key + "." + name, "missing");
  return *it;
}

double as_real(const json& value, const std::string& key) {
  if (!value.is_number()) fail(key, "expected a number");
  return value.get<double>();
}

int as_int(const json& value, const std::string& key) {
  if (!value.is_number_integer()) fail(key, "expected an integer");
  return value.get<int>();
}

std::vector<int> as_index_list(const json& value, const std::string& key) {
  if (!value.is_array()) fail(key, "expected an array of vertex indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_int(value[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Vector as_vector(const json& value, const std::string& key, int n) {
  if (!value.is_array()) fail(key, "expected an array");
  if (static_cast<int>(value.size()) != n) {
    fail(key, "expected " + std::to_string(n) + " entries, got " + std::to_string(value.size()));
  }
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = as_real(value[static_cast<std::size_t>(i)], key + "[" + std::to_string(i) + "]");
  return out;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& err) {
    throw ParseError(path + ": " + err.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

template <typename Fn>
auto with_context(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& err) {
    throw ParseError(path + ": " + err.what());
  }
}

}  // namespace

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

ProblemInstance instance_from_json(const json& doc) {
  ProblemInstance instance;
  instance.n = as_int(field(doc, "n", "$"), "n");
  if (instance.n <= 0) fail("n", "must be positive");
  instance.a = as_vector(field(doc, "a", "$"), "a", instance.n);

  const json& functions = field(doc, "functions", "$");
  if (!functions.is_array()) fail("functions", "expected an array");
  for (std::size_t r = 0; r < functions.size(); ++r) {
    const std::string key = "functions[" + std::to_string(r) + "]";
    const json& f = functions[r];
    const std::string kind_name = [&] {
      const json& kind = field(f, "kind", key);
      if (!kind.is_string()) fail(key + ".kind", "expected a string");
      return kind.get<std::string>();
    }();
    const double weight = f.contains("weight") ? as_real(f["weight"], key + ".weight") : 1.0;
    const auto members = as_index_list(field(f, "members", key), key + ".members");
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (members[k] < 0 || members[k] >= instance.n) {
        fail(key + ".members[" + std::to_string(k) + "]", "vertex out of range");
      }
    }
    try {
      switch (atom_kind_from_string(kind_name)) {
        case AtomKind::GraphEdge:
          if (members.size() != 2) fail(key + ".members", "graph_edge needs exactly 2 members");
          instance.atoms.push_back(SubmodularAtom::graph_edge(members[0], members[1], weight));
          break;
        case AtomKind::UndirectedHyperedge:
          instance.atoms.push_back(SubmodularAtom::undirected(members, weight));
          break;
        case AtomKind::DirectedHyperedge:
          instance.atoms.push_back(SubmodularAtom::directed(
              members, as_index_list(field(f, "head", key), key + ".head"),
              as_index_list(field(f, "tail", key), key + ".tail"), weight));
          break;
        case AtomKind::CardinalityTheta:
          instance.atoms.push_back(SubmodularAtom::cardinality(
              members, as_real(field(f, "theta", key), key + ".theta"), weight));
          break;
      }
    } catch (const std::invalid_argument& err) {
      fail(key, err.what());
    }
  }

  const json& w = field(doc, "w", "$");
  if (w.is_array()) {
    instance.w_diag = as_vector(w, "w", instance.n);
  } else if (w.is_object()) {
    const json& variant = field(w, "variant", "w");
    if (!variant.is_string()) fail("w.variant", "expected a string");
    const double beta = as_real(field(w, "beta", "w"), "w.beta");
    if (!(beta > 0.0)) fail("w.beta", "must be positive");
    DegreeVariant dv;
    if (variant == "degree") {
      dv = DegreeVariant::MaxSquared;
    } else if (variant == "incidence") {
      dv = DegreeVariant::IncidenceCount;
    } else {
      fail("w.variant", "expected \"degree\" or \"incidence\"");
    }
    try {
      instance.w_diag = beta * degree_vector(instance, dv);
    } catch (const std::exception& err) {
      fail("w", err.what());
    }
  } else {
    fail("w", "expected an array or a {variant, beta} object");
  }

  try {
    instance.validate();
  } catch (const std::invalid_argument& err) {
    fail("$", err.what());
  }
  return instance;
}

json instance_to_json(const ProblemInstance& instance) {
  json functions = json::array();
  for (const auto& atom : instance.atoms) {
    json f;
    f["kind"] = std::string(to_string(atom.kind()));
    f["weight"] = atom.weight();
    f["members"] = atom.members();
    if (atom.kind() == AtomKind::DirectedHyperedge) {
      f["head"] = atom.head();
      f["tail"] = atom.tail();
    }
    if (atom.kind() == AtomKind::CardinalityTheta) f["theta"] = atom.theta();
    functions.push_back(std::move(f));
  }
  json doc;
  doc["n"] = instance.n;
  doc["a"] = to_std(instance.a);
  doc["w"] = to_std(instance.w_diag);
  doc["functions"] = std::move(functions);
  return doc;
}

ProblemInstance parse_instance(const std::string& path) {
  const json doc = read_json(path);
  return with_context(path, [&] { return instance_from_json(doc); });
}

void write_instance(const ProblemInstance& instance, const std::string& path) {
  write_text(path, instance_to_json(instance).dump(1) + "\n");
}

Hypergraph hypergraph_from_json(const json& doc) {
  Hypergraph hg;
  hg.n = as_int(field(doc, "n", "$"), "n");
  if (hg.n <= 0) fail("n", "must be positive");
  const json& edges = field(doc, "edges", "$");
  if (!edges.is_array()) fail("edges", "expected an array");
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const std::string key = "edges[" + std::to_string(r) + "]";
    const json& e = edges[r];
    HyperEdge edge;
    edge.weight = e.contains("weight") ? as_real(e["weight"], key + ".weight") : 1.0;
    edge.members = as_index_list(field(e, "members", key), key + ".members");
    if (e.contains("head") || e.contains("tail")) {
      edge.head = as_index_list(field(e, "head", key), key + ".head");
      edge.tail = as_index_list(field(e, "tail", key), key + ".tail");
      if (edge.head.empty() || edge.tail.empty()) fail(key, "head and tail must be nonempty");
    }
    hg.edges.push_back(std::move(edge));
  }
  if (doc.contains("truth")) {
    hg.truth = as_index_list(doc["truth"], "truth");
  }
  try {
    hg.validate();
  } catch (const std::invalid_argument& err) {
    fail("$", err.what());
  }
  return hg;
}

json hypergraph_to_json(const Hypergraph& hg) {
  json edges = json::array();
  for (const auto& e : hg.edges) {
    json edge;
    edge["weight"] = e.weight;
    edge["members"] = e.members;
    if (e.directed()) {
      edge["head"] = e.head;
      edge["tail"] = e.tail;
    }
    edges.push_back(std::move(edge));
  }
  json doc;
  doc["n"] = hg.n;
  doc["edges"] = std::move(edges);
  if (!hg.truth.empty()) doc["truth"] = hg.truth;
  return doc;
}

Hypergraph parse_hypergraph(const std::string& path) {
  const json doc = read_json(path);
  return with_context(path, [&] { return hypergraph_from_json(doc); });
}

void write_hypergraph(const Hypergraph& hg, const std::string& path) {
  write_text(path, hypergraph_to_json(hg).dump() + "\n");
}

void write_trace(const std::vector<TraceRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("trace has no rows");
  std::string text = "iteration,elapsed_seconds,dual_objective,duality_gap\n";
  for (const auto& row : rows) {
    text += std::to_string(row.iteration) + "," + format_real(row.elapsed_seconds) + "," +
            format_real(row.dual_objective) + "," + format_real(row.duality_gap) + "\n";
  }
  write_text(path, text);
}

std::vector<TraceRow> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::string line;
  if (!std::getline(in, line) || line != "iteration,elapsed_seconds,dual_objective,duality_gap") {
    throw ParseError(path + ":1: unexpected header");
  }
  std::vector<TraceRow> rows;
  for (int number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    TraceRow row;
    std::istringstream fields(line);
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> row.iteration >> c1 >> row.elapsed_seconds >> c2 >> row.dual_objective >>
          c3 >> row.duality_gap) ||
        c1 != ',' || c2 != ',' || c3 != ',') {
      throw ParseError(path + ":" + std::to_string(number) + ": malformed row");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_vector(const Vector& values, const std::string& path) {
  std::string text;
  for (Eigen::Index i = 0; i < values.size(); ++i) text += format_real(values[i]) + "\n";
  write_text(path, text);
}

Vector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::vector<double> values;
  std::string line;
  for (int number = 1; std::getline(in, line); ++number) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream field_stream(line);
    double value = 0.0;
    std::string rest;
    if (!(field_stream >> value) || (field_stream >> rest)) {
      throw ParseError(path + ":" + std::to_string(number) + ": expected one real");
    }
    values.push_back(value);
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace qdsfm
