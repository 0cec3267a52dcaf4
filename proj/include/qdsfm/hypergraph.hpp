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

// Hypergraph applications built on the QDSFM solvers: personalized
// PageRank, conductance and sweep cuts, Lovasz-Simonovits curves,
// semi-supervised learning, and synthetic instance generators.

#ifndef QDSFM_HYPERGRAPH_HPP_
#define QDSFM_HYPERGRAPH_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "qdsfm/dual_solvers.hpp"
#include "qdsfm/submodular.hpp"

namespace qdsfm {

// An (un)directed hyperedge. Empty head and tail mean undirected, which
// behaves as head = tail = members.
struct HyperEdge {
  double weight = 1.0;
  std::vector<int> members;
  std::vector<int> head;
  std::vector<int> tail;

  bool directed() const { return !head.empty() || !tail.empty(); }
  bool operator==(const HyperEdge&) const = default;
};

struct Hypergraph {
  int n = 0;
  std::vector<HyperEdge> edges;
  // Optional ground-truth class per vertex (+1/-1); empty when unknown.
  std::vector<int> truth;

  // d_i = sum of w_r over hyperedges containing i.
  Vector degrees() const;
  double volume() const { return degrees().sum(); }
  bool is_graph() const;

  // One atom per hyperedge carrying the hyperedge weight, so that
  // f_r'(x)^2 = w_r f_r(x)^2. Size-2 undirected edges become graph edges.
  std::vector<SubmodularAtom> atoms() const;

  // Throws std::invalid_argument on malformed edges or a zero-degree vertex.
  void validate() const;
  bool operator==(const Hypergraph&) const = default;
};

struct PageRankResult {
  Vector p;
  SolveReport report;
};

// pr(alpha, p0) through the QDSFM instance x0 = D^{-1} p0,
// W = alpha / (1 - alpha) D, solved by RCD; returns p = D x.
PageRankResult pagerank(const Hypergraph& hg, double alpha, const Vector& p0,
                        const SolverConfig& config = {});

struct CutStats {
  double vol_set = 0.0;
  double vol_complement = 0.0;
  double vol_boundary = 0.0;
};

// Boundary counts hyperedges with a head inside S and a tail outside.
CutStats cut_stats(const Hypergraph& hg, const std::vector<int>& set);

// vol(boundary) / min(vol(S), vol(complement)). Domain error for S empty or V.
double conductance(const Hypergraph& hg, const std::vector<int>& set);

struct SweepResult {
  std::vector<int> best_set;
  double best_conductance = 0.0;
  std::vector<std::pair<int, double>> per_prefix;  // (j, conductance of S_j)
};

// Vertices ordered by descending p_i / d_i, ties by ascending index.
std::vector<int> sweep_order(const Vector& scores);

SweepResult sweep_cut(const Hypergraph& hg, const Vector& p);

struct LSCurve {
  // (vol(S_j), p(S_j)) at the end of each tie group, starting at (0, 0).
  std::vector<std::pair<double, double>> breakpoints;

  // Linear interpolation; domain error outside [0, m].
  double evaluate(double z) const;
};

LSCurve ls_curve(const Hypergraph& hg, const Vector& p);

struct SslOptions {
  double beta = 0.02;
  Method method = Method::RCD;
  SolverConfig solver;
};

struct SslResult {
  Vector scores;                // x
  std::vector<int> predicted;  // sign of x, +1 for x_i >= 0
  SolveReport report;
};

// min beta ||x - a||^2 + sum_r w_r max_{i,j in S_r} (x_i/sqrt(n_i) - x_j/sqrt(n_j))^2
// with a_i in {-1, 0, 1} and n = w_norm. The normalization is folded into
// the instance metric: u = x / sqrt(n) solves the QDSFM problem with
// W = beta n and a' = a / sqrt(n).
SslResult ssl_solve(const Hypergraph& hg, const std::vector<int>& labels,
                    const Vector& w_norm, const SslOptions& options);

struct MulticlassResult {
  std::vector<Vector> scores;  // one per class
  std::vector<int> predicted;  // argmax class, ties to the lower class
};

// labels[i] in [0, classes) or -1 for unlabeled; one solve per class with
// a_i = 1 on that class and 0 elsewhere.
MulticlassResult ssl_solve_multiclass(const Hypergraph& hg, const std::vector<int>& labels,
                                      int classes, const Vector& w_norm,
                                      const SslOptions& options);

enum class CheegerDenominator { Min, Max };

struct CheegerResult {
  std::vector<int> set;           // top prefix, predicted +1
  double score = 0.0;             // ratio at the chosen prefix
  std::vector<int> predicted;     // +1 inside the set, -1 outside
};

// Sorts x_i / sqrt(n_i) descending and picks the proper prefix minimizing
//   #{r crossing S_j} / den(sum_r |S_r & S_j|, sum_r |S_r & ~S_j|).
CheegerResult cheeger_classify(const Hypergraph& hg, const Vector& x, const Vector& w_norm,
                               CheegerDenominator denominator = CheegerDenominator::Min);

double classification_error(const std::vector<int>& predicted, const std::vector<int>& truth);

struct ClusterParams {
  int n = 1000;
  int intra_per_cluster = 500;
  int cross = 1000;
  int edge_size = 20;
  int labels_per_cluster = 3;
};

struct ClusterData {
  Hypergraph hg;            // truth: +1 for the first half, -1 for the second
  std::vector<int> labels;  // +1/-1 on the labeled vertices, 0 elsewhere
};

ClusterData generate_cluster_hypergraph(const ClusterParams& params, std::uint64_t seed);

// Picks `per_class` vertices of each truth class uniformly at random.
std::vector<int> sample_labels(const std::vector<int>& truth, int per_class,
                               std::uint64_t seed);

struct CardinalityParams {
  int n = 100;
  int r = 100;
  int set_size = 10;
  double theta = 1.0;
};

ProblemInstance generate_cardinality_bench(const CardinalityParams& params,
                                           std::uint64_t seed);

}  // namespace qdsfm

#endif  // QDSFM_HYPERGRAPH_HPP_
