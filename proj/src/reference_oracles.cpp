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

#include "qdsfm/reference_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdsfm {

namespace {

void refuse_above(std::size_t size, std::size_t bound, const char* what) {
  if (size > bound) {
    throw std::length_error(std::string(what) + " " + std::to_string(size) +
                            " exceeds the oracle bound " + std::to_string(bound));
  }
}

}  // namespace

VertexEnumeration enumerate_base_vertices(const SubmodularAtom& atom) {
  refuse_above(atom.size(), 8, "atom size");
  std::vector<int> order(atom.size());
  std::iota(order.begin(), order.end(), 0);
  VertexEnumeration out;
  do {
    Vector q = greedy_vertex(atom, order);
    const bool seen = std::any_of(out.vertices.begin(), out.vertices.end(),
                                  [&](const Vector& v) { return (v - q).lpNorm<Eigen::Infinity>() <= 1e-12; });
    if (!seen) out.vertices.push_back(std::move(q));
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

bool in_base_polytope(const SubmodularAtom& atom, const Vector& y_local, double tol) {
  const std::size_t k = atom.size();
  refuse_above(k, 12, "atom size");
  const std::uint32_t full = (1u << k) - 1;
  std::vector<bool> mask(k);
  for (std::uint32_t bits = 1; bits <= full; ++bits) {
    double y_sum = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
      mask[p] = (bits >> p) & 1u;
      if (mask[p]) y_sum += y_local[static_cast<Eigen::Index>(p)];
    }
    const double f = evaluate_mask(atom, mask);
    if (y_sum > f + tol) return false;
    if (bits == full && std::abs(y_sum - f) > tol) return false;
  }
  return true;
}

ProjectionResult brute_projection(const SubmodularAtom& atom, const Vector& a,
                                  const Vector& w_tilde) {
  refuse_above(atom.size(), 6, "atom size");
  const auto k = static_cast<Eigen::Index>(atom.size());
  if (a.size() != k || w_tilde.size() != k) {
    throw std::invalid_argument("a and w_tilde must match the atom size");
  }
  const auto vertices = enumerate_base_vertices(atom).vertices;
  const auto m = static_cast<Eigen::Index>(vertices.size());

  // min_{lambda >= 0} ||A lambda - c||^2 with A = [sqrt(Wt) V; 1^T].
  Eigen::MatrixXd A(k + 1, m);
  const Vector root = w_tilde.cwiseSqrt();
  for (Eigen::Index j = 0; j < m; ++j) {
    A.col(j).head(k) = root.cwiseProduct(vertices[static_cast<std::size_t>(j)]);
    A(k, j) = 1.0;
  }
  Vector c = Vector::Zero(k + 1);
  c.head(k) = root.cwiseProduct(a);

  // Lawson-Hanson active set. Each added column has a positive correlation
  // with a residual orthogonal to the passive columns, so the passive
  // least-squares systems stay full rank.
  const double tol = 1e-14 * (1.0 + c.norm()) * std::max(1.0, A.norm());
  Vector lambda = Vector::Zero(m);
  std::vector<bool> passive(static_cast<std::size_t>(m), false);
  auto passive_fit = [&]() {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Eigen::MatrixXd sub(k + 1, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t s = 0; s < cols.size(); ++s) sub.col(static_cast<Eigen::Index>(s)) = A.col(cols[s]);
    const Vector coef = sub.colPivHouseholderQr().solve(c);
    Vector z = Vector::Zero(m);
    for (std::size_t s = 0; s < cols.size(); ++s) z[cols[s]] = coef[static_cast<Eigen::Index>(s)];
    return z;
  };
  const int max_outer = 10 * static_cast<int>(m) + 10;
  for (int outer = 0; outer < max_outer; ++outer) {
    const Vector dual = A.transpose() * (c - A * lambda);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && dual[j] > best) {
        best = dual[j];
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[static_cast<std::size_t>(enter)] = true;
    for (int inner = 0; inner < static_cast<int>(m) + 1; ++inner) {
      const Vector z = passive_fit();
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, lambda[j] / (lambda[j] - z[j]));
        }
      }
      if (feasible) {
        lambda = z;
        break;
      }
      lambda += alpha * (z - lambda);
      const double floor = 1e-15 * (1.0 + lambda.maxCoeff());
      for (Eigen::Index j = 0; j < m; ++j) {
        if (passive[static_cast<std::size_t>(j)] && lambda[j] <= floor) {
          passive[static_cast<std::size_t>(j)] = false;
          lambda[j] = 0.0;
        }
      }
    }
  }

  ProjectionResult result;
  result.y = Vector::Zero(k);
  for (Eigen::Index j = 0; j < m; ++j) {
    result.y += lambda[j] * vertices[static_cast<std::size_t>(j)];
  }
  result.phi = lambda.sum();
  result.h_value = projection_objective(result.y, result.phi, a, w_tilde);
  return result;
}

Vector brute_qdsfm(const ProblemInstance& instance) {
  instance.validate();
  refuse_above(static_cast<std::size_t>(instance.n), 6, "vertex count");
  refuse_above(instance.atoms.size(), 4, "function count");
  const int n = instance.n;

  Vector best_x = instance.a;
  double best_value = primal_objective(instance, best_x);

  // block[i] assigns vertex i to a level; level 0 holds the largest value.
  std::vector<int> block(static_cast<std::size_t>(n), 0);
  const auto total = static_cast<std::int64_t>(std::pow(n, n));
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t rest = code;
    int levels = 0;
    for (int i = 0; i < n; ++i) {
      block[static_cast<std::size_t>(i)] = static_cast<int>(rest % n);
      rest /= n;
      levels = std::max(levels, block[static_cast<std::size_t>(i)] + 1);
    }
    std::vector<bool> used(static_cast<std::size_t>(levels), false);
    for (int b : block) used[static_cast<std::size_t>(b)] = true;
    if (!std::all_of(used.begin(), used.end(), [](bool u) { return u; })) continue;

    // Objective in the level values v:
    //   sum_i W_i (v_{b(i)} - a_i)^2 + sum_r (g_r . v)^2
    // with g_r[j] the marginal of F_r when level j joins the prefix.
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(levels, levels);
    Vector rhs = Vector::Zero(levels);
    for (int i = 0; i < n; ++i) {
      const int b = block[static_cast<std::size_t>(i)];
      H(b, b) += instance.w_diag[i];
      rhs[b] += instance.w_diag[i] * instance.a[i];
    }
    for (const auto& atom : instance.atoms) {
      Vector g = Vector::Zero(levels);
      std::vector<bool> mask(atom.size(), false);
      double previous = 0.0;
      for (int j = 0; j < levels; ++j) {
        for (std::size_t p = 0; p < atom.size(); ++p) {
          if (block[static_cast<std::size_t>(atom.members()[p])] == j) mask[p] = true;
        }
        const double current = evaluate_mask(atom, mask);
        g[j] = current - previous;
        previous = current;
      }
      H += g * g.transpose();
    }
    const Vector v = H.ldlt().solve(rhs);
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = v[block[static_cast<std::size_t>(i)]];
    // Scored by the true objective, so inconsistent orderings only give
    // upper bounds and the true minimizer's ordering always wins.
    const double value = primal_objective(instance, x);
    if (value < best_value) {
      best_value = value;
      best_x = x;
    }
  }
  return best_x;
}

double brute_conductance(const Hypergraph& hg, const std::vector<int>& set) {
  std::vector<bool> in(static_cast<std::size_t>(hg.n), false);
  for (int v : set) in[static_cast<std::size_t>(v)] = true;
  double vol_in = 0.0;
  double vol_out = 0.0;
  double boundary = 0.0;
  for (const auto& e : hg.edges) {
    for (int v : e.members) (in[static_cast<std::size_t>(v)] ? vol_in : vol_out) += e.weight;
    const auto& heads = e.directed() ? e.head : e.members;
    const auto& tails = e.directed() ? e.tail : e.members;
    bool head_in = false;
    bool tail_out = false;
    for (int v : heads) head_in = head_in || in[static_cast<std::size_t>(v)];
    for (int v : tails) tail_out = tail_out || !in[static_cast<std::size_t>(v)];
    if (head_in && tail_out) boundary += e.weight;
  }
  return boundary / std::min(vol_in, vol_out);
}

ConductanceMin brute_min_conductance(const Hypergraph& hg) {
  refuse_above(static_cast<std::size_t>(hg.n), 16, "vertex count");
  hg.validate();
  ConductanceMin best;
  best.value = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (1u << hg.n) - 1;
  for (std::uint32_t bits = 1; bits < full; ++bits) {
    std::vector<int> set;
    for (int i = 0; i < hg.n; ++i) {
      if ((bits >> i) & 1u) set.push_back(i);
    }
    const double value = brute_conductance(hg, set);
    if (value < best.value) {
      best.value = value;
      best.set = std::move(set);
    }
  }
  return best;
}

Vector dense_graph_pagerank(const Hypergraph& hg, double alpha, const Vector& p0) {
  refuse_above(static_cast<std::size_t>(hg.n), 200, "vertex count");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in (0, 1)");
  for (const auto& e : hg.edges) {
    if (e.directed() || e.members.size() != 2) {
      throw std::domain_error("dense pagerank accepts undirected size-2 edges only");
    }
  }
  hg.validate();
  if (p0.size() != hg.n) throw std::invalid_argument("p0 must have length n");

  const Vector d = hg.degrees();
  const Vector w = (alpha / (1.0 - alpha)) * d;
  Eigen::MatrixXd system = w.asDiagonal();
  for (const auto& e : hg.edges) {
    const int i = e.members[0];
    const int j = e.members[1];
    system(i, i) += e.weight;
    system(j, j) += e.weight;
    system(i, j) -= e.weight;
    system(j, i) -= e.weight;
  }
  const Vector x0 = p0.cwiseQuotient(d);
  const Vector x = system.ldlt().solve(w.cwiseProduct(x0));
  return d.cwiseProduct(x);
}

}  // namespace qdsfm
