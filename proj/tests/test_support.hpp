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

// Random generators shared by the test binaries.

#ifndef QDSFM_TESTS_TEST_SUPPORT_HPP_
#define QDSFM_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <vector>

#include "qdsfm/hypergraph.hpp"
#include "qdsfm/rng.hpp"
#include "qdsfm/submodular.hpp"

namespace qdsfm::testing {

inline Vector random_normal(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

inline Vector random_uniform(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(lo, hi);
  return v;
}

inline std::vector<int> random_members(Rng& rng, int n, int k) {
  std::vector<int> m = rng.sample_distinct(n, k);
  std::sort(m.begin(), m.end());
  return m;
}

// Random nonempty head and tail drawn from the members (they may overlap).
inline SubmodularAtom random_directed(Rng& rng, const std::vector<int>& members,
                                      double weight) {
  const int k = static_cast<int>(members.size());
  auto pick = [&] {
    const int count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    std::vector<int> out;
    for (int p : rng.sample_distinct(k, count)) out.push_back(members[static_cast<std::size_t>(p)]);
    std::sort(out.begin(), out.end());
    return out;
  };
  auto head = pick();
  auto tail = pick();
  return SubmodularAtom::directed(members, head, tail, weight);
}

inline SubmodularAtom random_atom_of_kind(Rng& rng, AtomKind kind, const std::vector<int>& members) {
  const double weight = rng.uniform(0.2, 3.0);
  switch (kind) {
    case AtomKind::GraphEdge:
      return SubmodularAtom::graph_edge(members[0], members[1], weight);
    case AtomKind::UndirectedHyperedge:
      return SubmodularAtom::undirected(members, weight);
    case AtomKind::DirectedHyperedge:
      return random_directed(rng, members, weight);
    case AtomKind::CardinalityTheta:
      break;
  }
  const double thetas[] = {0.25, 0.5, 1.0};
  return SubmodularAtom::cardinality(members, thetas[rng.below(3)], weight);
}

// Any kind, |S| in [2, max_size], members drawn from [0, n).
inline SubmodularAtom random_atom(Rng& rng, int n, int max_size) {
  const int k = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, max_size) - 1)));
  const auto members = random_members(rng, n, k);
  AtomKind kind = static_cast<AtomKind>(1 + rng.below(3));
  if (k == 2 && rng.below(2) == 0) kind = AtomKind::GraphEdge;
  return random_atom_of_kind(rng, kind, members);
}

// Random valid instance: every vertex covered, positive diagonal W.
inline ProblemInstance random_instance(Rng& rng, int n, int r, int max_size) {
  ProblemInstance inst;
  inst.n = n;
  inst.a = random_normal(rng, n);
  inst.w_diag = random_uniform(rng, n, 0.5, 2.0);
  for (;;) {
    inst.atoms.clear();
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (int k = 0; k < r; ++k) {
      inst.atoms.push_back(random_atom(rng, n, max_size));
      for (int v : inst.atoms.back().members()) covered[static_cast<std::size_t>(v)] = true;
    }
    if (std::all_of(covered.begin(), covered.end(), [](bool c) { return c; })) break;
  }
  return inst;
}

// Random connected-ish ordinary graph on n vertices: a spanning path plus
// extra random edges, weights in [0.5, 2].
inline Hypergraph random_graph(Rng& rng, int n, int extra) {
  Hypergraph hg;
  hg.n = n;
  const std::vector<int> perm = rng.sample_distinct(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    hg.edges.push_back({rng.uniform(0.5, 2.0),
                        {std::min(perm[i], perm[i + 1]), std::max(perm[i], perm[i + 1])}, {}, {}});
  }
  for (int k = 0; k < extra; ++k) {
    auto m = random_members(rng, n, 2);
    hg.edges.push_back({rng.uniform(0.5, 2.0), m, {}, {}});
  }
  return hg;
}

// Random hypergraph with every vertex covered; some edges directed.
inline Hypergraph random_hypergraph(Rng& rng, int n, int edges, int max_size, bool directed) {
  Hypergraph hg;
  hg.n = n;
  for (;;) {
    hg.edges.clear();
    for (int k = 0; k < edges; ++k) {
      const int size = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(n, max_size) - 1)));
      HyperEdge e;
      e.weight = rng.uniform(0.5, 2.0);
      e.members = random_members(rng, n, size);
      if (directed && rng.below(2) == 0) {
        const auto atom = random_directed(rng, e.members, 1.0);
        e.head = atom.head();
        e.tail = atom.tail();
      }
      hg.edges.push_back(std::move(e));
    }
    const Vector d = hg.degrees();
    if ((d.array() > 0.0).all()) return hg;
  }
}

}  // namespace qdsfm::testing

#endif  // QDSFM_TESTS_TEST_SUPPORT_HPP_
