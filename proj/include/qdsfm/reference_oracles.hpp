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

// Slow brute-force references for small inputs. Each refuses inputs above
// its size bound with std::length_error.

#ifndef QDSFM_REFERENCE_ORACLES_HPP_
#define QDSFM_REFERENCE_ORACLES_HPP_

#include <vector>

#include "qdsfm/hypergraph.hpp"
#include "qdsfm/projection.hpp"
#include "qdsfm/submodular.hpp"

namespace qdsfm {

struct VertexEnumeration {
  std::vector<Vector> vertices;  // local coordinates, deduplicated
};

// Greedy vertices over all |S|! orderings; |S| <= 8.
VertexEnumeration enumerate_base_vertices(const SubmodularAtom& atom);

// Checks y(A) <= F(A) for every A and y(S) = F(S) within tol; |S| <= 12.
bool in_base_polytope(const SubmodularAtom& atom, const Vector& y_local, double tol = 1e-9);

// Cone projection as a nonnegative least-squares problem over the
// enumerated vertices, solved by the Lawson-Hanson active-set method;
// |S| <= 6.
ProjectionResult brute_projection(const SubmodularAtom& atom, const Vector& a,
                                  const Vector& w_tilde);

// Exact QDSFM minimizer for N <= 6, R <= 4. The objective is a convex
// quadratic on each cone of a fixed weak ordering of x, so the global
// minimizer is the best of the per-ordering unconstrained minimizers.
Vector brute_qdsfm(const ProblemInstance& instance);

struct ConductanceMin {
  std::vector<int> set;
  double value = 0.0;
};

// Exhaustive minimum conductance over all 2^N - 2 proper subsets; N <= 16.
// Ties resolve to the smallest bitmask.
ConductanceMin brute_min_conductance(const Hypergraph& hg);

// Conductance recomputed from the definitions, bypassing cut_stats.
double brute_conductance(const Hypergraph& hg, const std::vector<int>& set);

// PageRank on an ordinary undirected graph via the dense linear system
// (W + L) x = W x0 with W = alpha / (1 - alpha) D; returns p = D x.
// Domain error if any edge is directed or not of size 2; N <= 200.
Vector dense_graph_pagerank(const Hypergraph& hg, double alpha, const Vector& p0);

}  // namespace qdsfm

#endif  // QDSFM_REFERENCE_ORACLES_HPP_
