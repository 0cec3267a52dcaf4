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

#include "qdsfm/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qdsfm/rng.hpp"

namespace qdsfm {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::vector<bool> to_mask(const Hypergraph& hg, const std::vector<int>& set) {
  std::vector<bool> mask(static_cast<std::size_t>(hg.n), false);
  for (int v : set) {
    require(v >= 0 && v < hg.n, "vertex " + std::to_string(v) + " out of range");
    mask[static_cast<std::size_t>(v)] = true;
  }
  return mask;
}

const std::vector<int>& heads_of(const HyperEdge& e) {
  return e.directed() ? e.head : e.members;
}

const std::vector<int>& tails_of(const HyperEdge& e) {
  return e.directed() ? e.tail : e.members;
}

// incidence[v] = indices of hyperedges whose members contain v.
std::vector<std::vector<int>> incidence_lists(const Hypergraph& hg) {
  std::vector<std::vector<int>> lists(static_cast<std::size_t>(hg.n));
  for (std::size_t r = 0; r < hg.edges.size(); ++r) {
    for (int v : hg.edges[r].members) lists[static_cast<std::size_t>(v)].push_back(static_cast<int>(r));
  }
  return lists;
}

void check_vector(const Hypergraph& hg, const Vector& v, const char* name) {
  require(v.size() == hg.n, std::string(name) + " must have length n");
}

}  // namespace

Vector Hypergraph::degrees() const {
  Vector d = Vector::Zero(n);
  for (const auto& e : edges) {
    for (int v : e.members) d[v] += e.weight;
  }
  return d;
}

bool Hypergraph::is_graph() const {
  return std::all_of(edges.begin(), edges.end(),
                     [](const HyperEdge& e) { return e.members.size() == 2; });
}

std::vector<SubmodularAtom> Hypergraph::atoms() const {
  std::vector<SubmodularAtom> out;
  out.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.directed()) {
      out.push_back(SubmodularAtom::directed(e.members, e.head, e.tail, e.weight));
    } else if (e.members.size() == 2) {
      out.push_back(SubmodularAtom::graph_edge(e.members[0], e.members[1], e.weight));
    } else {
      out.push_back(SubmodularAtom::undirected(e.members, e.weight));
    }
  }
  return out;
}

void Hypergraph::validate() const {
  require(n > 0, "hypergraph needs at least one vertex");
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto& e = edges[r];
    const std::string where = "edge " + std::to_string(r) + ": ";
    for (int v : e.members) {
      require(v >= 0 && v < n, where + "vertex " + std::to_string(v) + " out of range");
    }
    try {
      // Reuses the atom invariants (sizes, duplicates, head/tail subsets).
      if (e.directed()) {
        (void)SubmodularAtom::directed(e.members, e.head, e.tail, e.weight);
      } else {
        (void)SubmodularAtom::undirected(e.members, e.weight);
      }
    } catch (const std::invalid_argument& err) {
      throw std::invalid_argument(where + err.what());
    }
  }
  const Vector d = degrees();
  for (int i = 0; i < n; ++i) {
    require(d[i] > 0.0, "vertex " + std::to_string(i) + " has zero degree");
  }
  if (!truth.empty()) {
    require(truth.size() == static_cast<std::size_t>(n), "truth must have length n");
    for (int t : truth) require(t == 1 || t == -1, "truth labels must be +1 or -1");
  }
}

PageRankResult pagerank(const Hypergraph& hg, double alpha, const Vector& p0,
                        const SolverConfig& config) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha must lie in (0, 1)");
  }
  hg.validate();
  check_vector(hg, p0, "p0");
  require((p0.array() >= 0.0).all(), "p0 must be nonnegative");

  const Vector d = hg.degrees();
  ProblemInstance instance;
  instance.n = hg.n;
  instance.a = p0.cwiseQuotient(d);
  instance.w_diag = (alpha / (1.0 - alpha)) * d;
  instance.atoms = hg.atoms();

  PageRankResult result;
  result.report = rcd_solve(instance, config);
  result.p = d.cwiseProduct(result.report.x);
  return result;
}

CutStats cut_stats(const Hypergraph& hg, const std::vector<int>& set) {
  const std::vector<bool> mask = to_mask(hg, set);
  const Vector d = hg.degrees();
  CutStats stats;
  for (int i = 0; i < hg.n; ++i) {
    (mask[static_cast<std::size_t>(i)] ? stats.vol_set : stats.vol_complement) += d[i];
  }
  for (const auto& e : hg.edges) {
    const bool head_in = std::any_of(heads_of(e).begin(), heads_of(e).end(),
                                     [&](int v) { return mask[static_cast<std::size_t>(v)]; });
    const bool tail_out = std::any_of(tails_of(e).begin(), tails_of(e).end(),
                                      [&](int v) { return !mask[static_cast<std::size_t>(v)]; });
    if (head_in && tail_out) stats.vol_boundary += e.weight;
  }
  return stats;
}

double conductance(const Hypergraph& hg, const std::vector<int>& set) {
  const std::vector<bool> mask = to_mask(hg, set);
  const auto inside = std::count(mask.begin(), mask.end(), true);
  if (inside == 0 || inside == hg.n) {
    throw std::domain_error("conductance needs a nonempty proper subset");
  }
  const CutStats stats = cut_stats(hg, set);
  return stats.vol_boundary / std::min(stats.vol_set, stats.vol_complement);
}

std::vector<int> sweep_order(const Vector& scores) {
  std::vector<int> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return scores[i] > scores[j]; });
  return order;
}

SweepResult sweep_cut(const Hypergraph& hg, const Vector& p) {
  check_vector(hg, p, "p");
  const Vector d = hg.degrees();
  const std::vector<int> order = sweep_order(p.cwiseQuotient(d));
  const auto lists = incidence_lists(hg);
  const double total = d.sum();

  // Per edge: heads already inside and tails still outside.
  std::vector<int> heads_in(hg.edges.size(), 0);
  std::vector<int> tails_out(hg.edges.size());
  for (std::size_t r = 0; r < hg.edges.size(); ++r) {
    const auto& e = hg.edges[r];
    tails_out[r] = static_cast<int>(tails_of(e).size());
  }
  auto crosses = [&](std::size_t r) { return heads_in[r] > 0 && tails_out[r] > 0; };

  SweepResult result;
  result.best_conductance = std::numeric_limits<double>::infinity();
  int best_j = 0;
  double vol = 0.0;
  double boundary = 0.0;
  for (int j = 1; j < hg.n; ++j) {
    const int v = order[static_cast<std::size_t>(j - 1)];
    vol += d[v];
    for (int r_int : lists[static_cast<std::size_t>(v)]) {
      const auto r = static_cast<std::size_t>(r_int);
      const auto& e = hg.edges[r];
      const bool before = crosses(r);
      const auto& heads = heads_of(e);
      const auto& tails = tails_of(e);
      if (std::find(heads.begin(), heads.end(), v) != heads.end()) ++heads_in[r];
      if (std::find(tails.begin(), tails.end(), v) != tails.end()) --tails_out[r];
      const bool after = crosses(r);
      if (before != after) boundary += after ? e.weight : -e.weight;
    }
    const double phi = std::max(0.0, boundary) / std::min(vol, total - vol);
    result.per_prefix.emplace_back(j, phi);
    if (phi < result.best_conductance) {
      result.best_conductance = phi;
      best_j = j;
    }
  }
  result.best_set.assign(order.begin(), order.begin() + best_j);
  return result;
}

double LSCurve::evaluate(double z) const {
  if (breakpoints.empty()) throw std::logic_error("empty curve");
  const double m = breakpoints.back().first;
  const double slack = 1e-12 * std::max(1.0, m);
  if (z < -slack || z > m + slack) throw std::domain_error("z outside [0, m]");
  z = std::clamp(z, 0.0, m);
  auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), z,
                             [](const auto& bp, double value) { return bp.first < value; });
  if (it == breakpoints.begin()) return it->second;
  const auto& [z1, v1] = *it;
  const auto& [z0, v0] = *(it - 1);
  if (z1 == z0) return v1;
  return v0 + (v1 - v0) * (z - z0) / (z1 - z0);
}

LSCurve ls_curve(const Hypergraph& hg, const Vector& p) {
  check_vector(hg, p, "p");
  require((p.array() >= 0.0).all(), "p must be nonnegative");
  const Vector d = hg.degrees();
  const Vector x = p.cwiseQuotient(d);
  const std::vector<int> order = sweep_order(x);

  LSCurve curve;
  curve.breakpoints.emplace_back(0.0, 0.0);
  double vol = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    const int v = order[j];
    vol += d[v];
    mass += p[v];
    // Near-equal ratios are collinear up to rounding; merge them.
    const bool group_end =
        j + 1 == order.size() || x[order[j + 1]] < x[v] - 1e-12 * std::abs(x[v]);
    if (group_end) curve.breakpoints.emplace_back(vol, mass);
  }
  return curve;
}

SslResult ssl_solve(const Hypergraph& hg, const std::vector<int>& labels,
                    const Vector& w_norm, const SslOptions& options) {
  hg.validate();
  require(labels.size() == static_cast<std::size_t>(hg.n), "labels must have length n");
  check_vector(hg, w_norm, "w_norm");
  require((w_norm.array() > 0.0).all(), "w_norm must be positive");
  require(options.beta > 0.0, "beta must be positive");
  bool has_pos = false;
  bool has_neg = false;
  Vector a = Vector::Zero(hg.n);
  for (int i = 0; i < hg.n; ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    require(l >= -1 && l <= 1, "labels must be -1, 0 or 1");
    has_pos |= l == 1;
    has_neg |= l == -1;
    a[i] = l;
  }
  require(has_pos && has_neg, "need at least one labeled vertex per class");

  const Vector root = w_norm.cwiseSqrt();
  ProblemInstance instance;
  instance.n = hg.n;
  instance.a = a.cwiseQuotient(root);
  instance.w_diag = options.beta * w_norm;
  instance.atoms = hg.atoms();

  SslResult result;
  result.report = solve(instance, options.method, options.solver);
  result.scores = root.cwiseProduct(result.report.x);
  result.predicted.resize(static_cast<std::size_t>(hg.n));
  for (int i = 0; i < hg.n; ++i) {
    result.predicted[static_cast<std::size_t>(i)] = result.scores[i] >= 0.0 ? 1 : -1;
  }
  return result;
}

MulticlassResult ssl_solve_multiclass(const Hypergraph& hg, const std::vector<int>& labels,
                                      int classes, const Vector& w_norm,
                                      const SslOptions& options) {
  hg.validate();
  require(classes >= 2, "need at least two classes");
  require(labels.size() == static_cast<std::size_t>(hg.n), "labels must have length n");
  check_vector(hg, w_norm, "w_norm");
  require((w_norm.array() > 0.0).all(), "w_norm must be positive");
  require(options.beta > 0.0, "beta must be positive");
  std::vector<int> counts(static_cast<std::size_t>(classes), 0);
  for (int l : labels) {
    require(l >= -1 && l < classes, "label out of range");
    if (l >= 0) ++counts[static_cast<std::size_t>(l)];
  }
  for (int k = 0; k < classes; ++k) {
    require(counts[static_cast<std::size_t>(k)] > 0,
            "class " + std::to_string(k) + " has no labeled vertex");
  }

  const Vector root = w_norm.cwiseSqrt();
  ProblemInstance instance;
  instance.n = hg.n;
  instance.w_diag = options.beta * w_norm;
  instance.atoms = hg.atoms();

  MulticlassResult result;
  for (int k = 0; k < classes; ++k) {
    Vector a = Vector::Zero(hg.n);
    for (int i = 0; i < hg.n; ++i) {
      if (labels[static_cast<std::size_t>(i)] == k) a[i] = 1.0;
    }
    instance.a = a.cwiseQuotient(root);
    const SolveReport report = solve(instance, options.method, options.solver);
    result.scores.push_back(root.cwiseProduct(report.x));
  }
  result.predicted.assign(static_cast<std::size_t>(hg.n), 0);
  for (int i = 0; i < hg.n; ++i) {
    for (int k = 1; k < classes; ++k) {
      auto& best = result.predicted[static_cast<std::size_t>(i)];
      if (result.scores[static_cast<std::size_t>(k)][i] >
          result.scores[static_cast<std::size_t>(best)][i]) {
        best = k;
      }
    }
  }
  return result;
}

CheegerResult cheeger_classify(const Hypergraph& hg, const Vector& x, const Vector& w_norm,
                               CheegerDenominator denominator) {
  check_vector(hg, x, "x");
  check_vector(hg, w_norm, "w_norm");
  const std::vector<int> order = sweep_order(x.cwiseQuotient(w_norm.cwiseSqrt()));
  const auto lists = incidence_lists(hg);

  double total_incidence = 0.0;
  std::vector<int> outside(hg.edges.size());
  for (std::size_t r = 0; r < hg.edges.size(); ++r) {
    outside[r] = static_cast<int>(hg.edges[r].members.size());
    total_incidence += static_cast<double>(outside[r]);
  }
  const auto full = [&](std::size_t r) { return static_cast<int>(hg.edges[r].members.size()); };

  CheegerResult result;
  result.score = std::numeric_limits<double>::infinity();
  int best_j = 0;
  double inside_incidence = 0.0;
  int crossing = 0;
  for (int j = 1; j < hg.n; ++j) {
    const int v = order[static_cast<std::size_t>(j - 1)];
    for (int r_int : lists[static_cast<std::size_t>(v)]) {
      const auto r = static_cast<std::size_t>(r_int);
      const bool before = outside[r] > 0 && outside[r] < full(r);
      --outside[r];
      const bool after = outside[r] > 0 && outside[r] < full(r);
      crossing += static_cast<int>(after) - static_cast<int>(before);
      inside_incidence += 1.0;
    }
    const double rest = total_incidence - inside_incidence;
    const double den = denominator == CheegerDenominator::Min
                           ? std::min(inside_incidence, rest)
                           : std::max(inside_incidence, rest);
    if (den <= 0.0) continue;
    const double ratio = crossing / den;
    if (ratio < result.score) {
      result.score = ratio;
      best_j = j;
    }
  }
  if (best_j == 0) best_j = 1;  // every prefix degenerate
  result.set.assign(order.begin(), order.begin() + best_j);
  if (!std::isfinite(result.score)) result.score = 0.0;
  result.predicted.assign(static_cast<std::size_t>(hg.n), -1);
  for (int v : result.set) result.predicted[static_cast<std::size_t>(v)] = 1;
  return result;
}

double classification_error(const std::vector<int>& predicted, const std::vector<int>& truth) {
  require(predicted.size() == truth.size() && !truth.empty(),
          "prediction and truth lengths differ");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += predicted[i] != truth[i];
  return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

namespace {

std::vector<int> sample_labels_with(const std::vector<int>& truth, int per_class, Rng& rng) {
  std::vector<int> labels(truth.size(), 0);
  for (int cls : {1, -1}) {
    std::vector<int> pool;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth[i] == cls) pool.push_back(static_cast<int>(i));
    }
    require(per_class <= static_cast<int>(pool.size()), "more labels than class members");
    for (int k : rng.sample_distinct(static_cast<int>(pool.size()), per_class)) {
      labels[static_cast<std::size_t>(pool[static_cast<std::size_t>(k)])] = cls;
    }
  }
  return labels;
}

std::vector<int> sorted_sample(Rng& rng, int population, int count, int offset) {
  std::vector<int> members = rng.sample_distinct(population, count);
  for (int& v : members) v += offset;
  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace

std::vector<int> sample_labels(const std::vector<int>& truth, int per_class,
                               std::uint64_t seed) {
  Rng rng(seed);
  return sample_labels_with(truth, per_class, rng);
}

ClusterData generate_cluster_hypergraph(const ClusterParams& params, std::uint64_t seed) {
  require(params.n >= 2 && params.n % 2 == 0, "n must be even and at least 2");
  const int half = params.n / 2;
  require(params.edge_size >= 2, "edge size must be at least 2");
  require(params.edge_size <= half, "edge size exceeds the cluster size");
  require(params.intra_per_cluster >= 0 && params.cross >= 0, "edge counts must be >= 0");
  require(params.labels_per_cluster >= 1 && params.labels_per_cluster <= half,
          "labels per cluster must lie in [1, n/2]");

  Rng rng(seed);
  ClusterData data;
  data.hg.n = params.n;
  data.hg.truth.assign(static_cast<std::size_t>(params.n), -1);
  std::fill(data.hg.truth.begin(), data.hg.truth.begin() + half, 1);

  // Redraw the whole edge set until no vertex is isolated.
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) {
      throw std::runtime_error("could not cover every vertex; add more hyperedges");
    }
    data.hg.edges.clear();
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < params.intra_per_cluster; ++k) {
        data.hg.edges.push_back({1.0, sorted_sample(rng, half, params.edge_size, c * half), {}, {}});
      }
    }
    for (int k = 0; k < params.cross; ++k) {
      data.hg.edges.push_back({1.0, sorted_sample(rng, params.n, params.edge_size, 0), {}, {}});
    }
    const Vector d = data.hg.degrees();
    if ((d.array() > 0.0).all()) break;
  }
  data.labels = sample_labels_with(data.hg.truth, params.labels_per_cluster, rng);
  return data;
}

ProblemInstance generate_cardinality_bench(const CardinalityParams& params,
                                           std::uint64_t seed) {
  require(params.n >= 2 && params.r >= 1, "need n >= 2 and r >= 1");
  require(params.set_size >= 2 && params.set_size <= params.n, "set size must lie in [2, n]");
  require(params.theta > 0.0, "theta must be positive");
  Rng rng(seed);
  ProblemInstance instance;
  instance.n = params.n;
  instance.a.resize(params.n);
  for (int i = 0; i < params.n; ++i) instance.a[i] = rng.normal();
  instance.w_diag = Vector::Ones(params.n);
  for (int r = 0; r < params.r; ++r) {
    instance.atoms.push_back(SubmodularAtom::cardinality(
        sorted_sample(rng, params.n, params.set_size, 0), params.theta));
  }
  return instance;
}

}  // namespace qdsfm
