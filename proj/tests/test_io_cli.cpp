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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "qdsfm/cli.hpp"
#include "qdsfm/io.hpp"
#include "test_support.hpp"

using namespace qdsfm;
using namespace qdsfm::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("qdsfm_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string parse_error_message(const json& doc) {
  try {
    instance_from_json(doc);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

json minimal_instance() {
  return json::parse(R"({"n": 2, "a": [1, 0], "w": [1, 1],
    "functions": [{"kind": "graph_edge", "members": [0, 1]}]})");
}

}  // namespace

TEST_CASE("instance parsing: examples") {
  const auto inst = instance_from_json(minimal_instance());
  CHECK(inst.n == 2);
  CHECK(inst.atoms.size() == 1);
  CHECK(inst.atoms[0].kind() == AtomKind::GraphEdge);
  CHECK(inst.atoms[0].weight() == 1.0);

  auto degree = json::parse(R"({"n": 3, "a": [0, 0, 0], "w": {"variant": "degree", "beta": 0.02},
    "functions": [{"kind": "graph_edge", "weight": 2, "members": [0, 1]},
                  {"kind": "graph_edge", "weight": 3, "members": [1, 2]}]})");
  const auto dinst = instance_from_json(degree);
  CHECK(dinst.w_diag[0] == doctest::Approx(0.04));
  CHECK(dinst.w_diag[1] == doctest::Approx(0.1));
  CHECK(dinst.w_diag[2] == doctest::Approx(0.06));

  auto negative = minimal_instance();
  negative["functions"][0]["weight"] = -1.0;
  CHECK(parse_error_message(negative).find("functions[0]") != std::string::npos);

  auto duplicate = json::parse(R"({"n": 3, "a": [0, 0, 0], "w": [1, 1, 1],
    "functions": [{"kind": "graph_edge", "members": [0, 1]},
                  {"kind": "undirected_hyperedge", "members": [0, 2, 2]},
                  {"kind": "graph_edge", "members": [1, 2]}]})");
  CHECK(parse_error_message(duplicate).find("functions[1]") != std::string::npos);

  auto out_of_range = minimal_instance();
  out_of_range["functions"][0]["members"] = {0, 5};
  CHECK(parse_error_message(out_of_range).find("functions[0].members[1]") != std::string::npos);

  auto short_a = minimal_instance();
  short_a["a"] = {1.0};
  CHECK(parse_error_message(short_a).find("a") != std::string::npos);
  auto no_kind = minimal_instance();
  no_kind["functions"][0].erase("kind");
  CHECK(parse_error_message(no_kind).find("functions[0]") != std::string::npos);
}

TEST_CASE("parse_instance reports file problems as ParseError") {
  TempDir dir;
  CHECK_THROWS_AS(parse_instance(dir.file("missing.json")), ParseError);
  spit(dir.file("bad.json"), "{not json");
  CHECK_THROWS_AS(parse_instance(dir.file("bad.json")), ParseError);
}

TEST_CASE("property: instance and hypergraph round-trip") {
  Rng rng(50);
  TempDir dir;
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = random_instance(rng, 8, 5, 5);
    write_instance(inst, dir.file("i.json"));
    const auto back = parse_instance(dir.file("i.json"));
    CHECK(back.n == inst.n);
    CHECK(back.a == inst.a);
    CHECK(back.w_diag == inst.w_diag);
    REQUIRE(back.atoms.size() == inst.atoms.size());
    for (std::size_t r = 0; r < inst.atoms.size(); ++r) {
      CHECK(back.atoms[r].kind() == inst.atoms[r].kind());
      CHECK(back.atoms[r].members() == inst.atoms[r].members());
      CHECK(back.atoms[r].weight() == inst.atoms[r].weight());
    }

    auto hg = random_hypergraph(rng, 10, 6, 4, trial % 2 == 0);
    hg.truth.assign(10, 1);
    hg.truth[3] = -1;
    write_hypergraph(hg, dir.file("h.json"));
    CHECK(parse_hypergraph(dir.file("h.json")) == hg);
  }
}

TEST_CASE("trace: one row is a header plus one line and round-trips exactly") {
  TempDir dir;
  const TraceRow row{0, 0.125, -1.0 / 3.0, 2.0 / 7.0};
  write_trace({row}, dir.file("t.csv"));
  const std::string text = slurp(dir.file("t.csv"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.rfind("iteration,elapsed_seconds,dual_objective,duality_gap\n", 0) == 0);
  const auto back = read_trace(dir.file("t.csv"));
  REQUIRE(back.size() == 1);
  CHECK(back[0].iteration == 0);
  CHECK(back[0].elapsed_seconds == row.elapsed_seconds);
  CHECK(back[0].dual_objective == row.dual_objective);
  CHECK(back[0].duality_gap == row.duality_gap);
  CHECK_THROWS_AS(write_trace({}, dir.file("e.csv")), std::invalid_argument);
}

TEST_CASE("property: vectors round-trip exactly") {
  Rng rng(51);
  TempDir dir;
  for (int trial = 0; trial < 20; ++trial) {
    const Vector v = 1e3 * random_normal(rng, 17);
    write_vector(v, dir.file("v.txt"));
    CHECK(read_vector(dir.file("v.txt")) == v);
  }
  spit(dir.file("bad.txt"), "1.0\nabc\n");
  CHECK_THROWS_AS(read_vector(dir.file("bad.txt")), ParseError);
}

TEST_CASE("cli project: edge example") {
  TempDir dir;
  auto inst = minimal_instance();
  inst["a"] = {1.0, -1.0};
  spit(dir.file("e.json"), inst.dump());
  const auto r = run({"project", "--instance", dir.file("e.json"), "--atom", "0"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("h=0.666667") != std::string::npos);
  CHECK(r.out.find("backend exact") != std::string::npos);
}

TEST_CASE("cli gen: same seed gives identical files") {
  TempDir dir;
  CHECK(run({"gen", "--preset", "sec62", "--seed", "7", "--output", dir.file("a.json")}).code ==
        kExitOk);
  CHECK(run({"gen", "--preset", "sec62", "--seed", "7", "--output", dir.file("b.json")}).code ==
        kExitOk);
  CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
  const auto hg = parse_hypergraph(dir.file("a.json"));
  CHECK(hg.n == 1000);
  CHECK(hg.truth.size() == 1000);
}

TEST_CASE("cli solve: converges on a generated instance and is reproducible") {
  TempDir dir;
  REQUIRE(run({"gen", "--preset", "sec44", "--seed", "3", "--output", dir.file("c.json")}).code ==
          kExitOk);
  const auto inst = parse_instance(dir.file("c.json"));
  CHECK(inst.atoms.size() == 100);
  // The exact backend covers cut functions only; cardinality atoms need MNP or FW.
  const auto exact = run({"solve", "--instance", dir.file("c.json"), "--method", "rcd",
                          "--backend", "exact"});
  CHECK(exact.code == kExitData);
  CHECK(exact.err.find("exact backend") != std::string::npos);
  const auto mnp = run({"solve", "--instance", dir.file("c.json"), "--method", "rcd", "--backend",
                        "mnp", "--tol", "1e-9", "--trace", dir.file("c.csv")});
  CHECK(mnp.code == kExitOk);
  CHECK(read_trace(dir.file("c.csv")).back().duality_gap <= 1e-9);
  REQUIRE(run({"gen", "--preset", "cardinality", "--seed", "3", "--output",
               dir.file("alias.json")}).code == kExitOk);
  CHECK(slurp(dir.file("alias.json")) == slurp(dir.file("c.json")));

  // Directed cut instance for the exact backend.
  Rng rng(52);
  write_instance(random_instance(rng, 12, 10, 5), dir.file("d.json"));
  for (const char* tag : {"1", "2"}) {
    const auto r = run({"solve", "--instance", dir.file("d.json"), "--method", "rcd", "--backend",
                        "auto", "--tol", "1e-9", "--seed", "11", "--trace",
                        dir.file(std::string("t") + tag + ".csv"), "--solution",
                        dir.file(std::string("x") + tag + ".txt")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("converged yes") != std::string::npos);
  }
  const auto t1 = read_trace(dir.file("t1.csv"));
  const auto t2 = read_trace(dir.file("t2.csv"));
  CHECK(t1.back().duality_gap <= 1e-9);
  REQUIRE(t1.size() == t2.size());
  for (std::size_t k = 0; k < t1.size(); ++k) {
    CHECK(t1[k].iteration == t2[k].iteration);
    CHECK(t1[k].dual_objective == t2[k].dual_objective);
    CHECK(t1[k].duality_gap == t2[k].duality_gap);
  }
  CHECK(slurp(dir.file("x1.txt")) == slurp(dir.file("x2.txt")));
}

TEST_CASE("cli: exit codes") {
  TempDir dir;
  CHECK(run({"solve", "--bogus"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"solve", "--instance", dir.file("missing.json")}).code == kExitData);
  spit(dir.file("bad.json"), R"({"n": 2, "a": [1], "w": [1, 1], "functions": []})");
  const auto bad = run({"solve", "--instance", dir.file("bad.json")});
  CHECK(bad.code == kExitData);
  CHECK(bad.err.find("a") != std::string::npos);
  CHECK(run({"solve", "--instance", dir.file("bad.json"), "--method", "newton"}).code ==
        kExitUsage);
  CHECK(run({"pagerank", "--hypergraph", dir.file("h.json"), "--alpha", "0.5"}).code ==
        kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);

  REQUIRE(run({"gen", "--preset", "sec44", "--seed", "1", "--output", dir.file("c.json")}).code ==
          kExitOk);
  const auto stalled = run({"solve", "--instance", dir.file("c.json"), "--max-iters", "5",
                            "--tol", "1e-12", "--trace", dir.file("t.csv"), "--solution",
                            dir.file("x.txt")});
  CHECK(stalled.code == kExitNonconvergence);
  CHECK(stalled.out.find("converged no") != std::string::npos);
  CHECK(fs::exists(dir.file("t.csv")));
  CHECK(read_vector(dir.file("x.txt")).size() == 100);
}

TEST_CASE("cli pagerank: source mass on a small graph") {
  TempDir dir;
  Rng rng(53);
  write_hypergraph(random_graph(rng, 15, 10), dir.file("g.json"));
  const auto r = run({"pagerank", "--hypergraph", dir.file("g.json"), "--alpha", "0.2",
                      "--source", "0", "--sweep", "--output", dir.file("p.txt")});
  CHECK(r.code == kExitOk);
  const Vector p = read_vector(dir.file("p.txt"));
  CHECK(p.size() == 15);
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.out.find("sweep_set") != std::string::npos);
}
