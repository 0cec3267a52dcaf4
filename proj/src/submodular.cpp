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

#include "qdsfm/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace qdsfm {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::invalid_argument(message);
}

void check_distinct_nonnegative(const std::vector<int>& indices,
                                const char* what) {
  std::unordered_set<int> seen;
  for (int v : indices) {
    require(v >= 0, std::string(what) + ": negative vertex index");
    require(seen.insert(v).second,
            std::string(what) + ": duplicate vertex index " + std::to_string(v));
  }
}

// Incremental F over a growing prefix of local positions.
class PrefixEvaluator {
 public:
  explicit PrefixEvaluator(const SubmodularAtom& atom)
      : atom_(atom),
        sqrt_w_(std::sqrt(atom.weight())),
        tails_out_(static_cast<int>(atom.is_cut_kind() ? count_tails(atom) : 0)) {
    if (!atom.is_cut_kind()) {
      scale_ = sqrt_w_ / std::pow(static_cast<double>(atom.size()) / 2.0,
                                  atom.theta());
    }
  }

  // Adds local position `pos` and returns F of the new prefix.
  double push(std::size_t pos) {
    ++count_;
    if (atom_.is_cut_kind()) {
      if (atom_.in_head(pos)) ++heads_in_;
      if (atom_.in_tail(pos)) --tails_out_;
      return (heads_in_ > 0 && tails_out_ > 0) ? sqrt_w_ : 0.0;
    }
    const auto k = static_cast<int>(atom_.size());
    const int m = std::min(count_, k - count_);
    return m == 0 ? 0.0 : scale_ * std::pow(static_cast<double>(m), atom_.theta());
  }

 private:
  static std::size_t count_tails(const SubmodularAtom& atom) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < atom.size(); ++k) c += atom.in_tail(k) ? 1 : 0;
    return c;
  }

  const SubmodularAtom& atom_;
  double sqrt_w_;
  double scale_ = 0.0;
  int count_ = 0;
  int heads_in_ = 0;
  int tails_out_;
};

std::vector<int> descending_order(const SubmodularAtom& atom, const Vector& x) {
  std::vector<int> order(atom.size());
  std::iota(order.begin(), order.end(), 0);
  const auto& members = atom.members();
  std::sort(order.begin(), order.end(), [&](int p, int q) {
    if (x[p] != x[q]) return x[p] > x[q];
    return members[p] < members[q];
  });
  return order;
}

}  // namespace

std::string_view to_string(AtomKind kind) {
  switch (kind) {
    case AtomKind::GraphEdge: return "graph_edge";
    case AtomKind::UndirectedHyperedge: return "undirected_hyperedge";
    case AtomKind::DirectedHyperedge: return "directed_hyperedge";
    case AtomKind::CardinalityTheta: return "cardinality";
  }
  return "unknown";
}

AtomKind atom_kind_from_string(std::string_view name) {
  for (AtomKind k : {AtomKind::GraphEdge, AtomKind::UndirectedHyperedge,
                     AtomKind::DirectedHyperedge, AtomKind::CardinalityTheta}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown function kind '" + std::string(name) + "'");
}

SubmodularAtom SubmodularAtom::graph_edge(int i, int j, double weight) {
  SubmodularAtom atom;
  atom.kind_ = AtomKind::GraphEdge;
  atom.weight_ = weight;
  atom.members_ = {i, j};
  atom.finalize();
  return atom;
}

SubmodularAtom SubmodularAtom::undirected(std::vector<int> members, double weight) {
  SubmodularAtom atom;
  atom.kind_ = AtomKind::UndirectedHyperedge;
  atom.weight_ = weight;
  atom.members_ = std::move(members);
  atom.finalize();
  return atom;
}

SubmodularAtom SubmodularAtom::directed(std::vector<int> members,
                                        std::vector<int> head,
                                        std::vector<int> tail, double weight) {
  SubmodularAtom atom;
  atom.kind_ = AtomKind::DirectedHyperedge;
  atom.weight_ = weight;
  atom.members_ = std::move(members);
  atom.head_ = std::move(head);
  atom.tail_ = std::move(tail);
  atom.finalize();
  return atom;
}

SubmodularAtom SubmodularAtom::cardinality(std::vector<int> members, double theta,
                                           double weight) {
  SubmodularAtom atom;
  atom.kind_ = AtomKind::CardinalityTheta;
  atom.weight_ = weight;
  atom.theta_ = theta;
  atom.members_ = std::move(members);
  atom.finalize();
  return atom;
}

void SubmodularAtom::finalize() {
  require(std::isfinite(weight_) && weight_ >= 0.0,
          "function weight must be finite and nonnegative");
  require(members_.size() >= 2,
          "function must have at least two members (singletons are identically zero)");
  check_distinct_nonnegative(members_, "members");

  const std::size_t k = members_.size();
  in_head_.assign(k, false);
  in_tail_.assign(k, false);
  switch (kind_) {
    case AtomKind::GraphEdge:
      require(k == 2, "graph_edge must have exactly two members");
      [[fallthrough]];
    case AtomKind::UndirectedHyperedge:
      in_head_.assign(k, true);
      in_tail_.assign(k, true);
      head_.clear();
      tail_.clear();
      break;
    case AtomKind::DirectedHyperedge:
      require(!head_.empty() && !tail_.empty(),
              "directed_hyperedge needs nonempty head and tail");
      check_distinct_nonnegative(head_, "head");
      check_distinct_nonnegative(tail_, "tail");
      for (int v : head_) {
        const int pos = local_index(v);
        require(pos >= 0, "head vertex " + std::to_string(v) + " is not a member");
        in_head_[pos] = true;
      }
      for (int v : tail_) {
        const int pos = local_index(v);
        require(pos >= 0, "tail vertex " + std::to_string(v) + " is not a member");
        in_tail_[pos] = true;
      }
      break;
    case AtomKind::CardinalityTheta:
      require(std::isfinite(theta_) && theta_ > 0.0 && theta_ <= 1.0,
              "cardinality theta must lie in (0, 1]");
      head_.clear();
      tail_.clear();
      break;
  }
}

int SubmodularAtom::local_index(int vertex) const {
  const auto it = std::find(members_.begin(), members_.end(), vertex);
  return it == members_.end() ? -1 : static_cast<int>(it - members_.begin());
}

double SubmodularAtom::max_value() const {
  // Cut kinds reach sqrt(w) on any separating set; the cardinality family
  // peaks at |S| = floor(k/2).
  if (is_cut_kind()) return std::sqrt(weight_);
  const double k = static_cast<double>(members_.size());
  return std::sqrt(weight_) * std::pow(std::floor(k / 2.0) / (k / 2.0), theta_);
}

bool SubmodularAtom::operator==(const SubmodularAtom& other) const {
  return kind_ == other.kind_ && weight_ == other.weight_ &&
         (kind_ != AtomKind::CardinalityTheta || theta_ == other.theta_) &&
         members_ == other.members_ && head_ == other.head_ && tail_ == other.tail_;
}

void ProblemInstance::validate() const {
  require(n > 0, "n must be positive");
  require(a.size() == n, "a must have length n");
  require(w_diag.size() == n, "w must have length n");
  for (int i = 0; i < n; ++i) {
    require(std::isfinite(a[i]), "a contains a non-finite entry");
    require(std::isfinite(w_diag[i]) && w_diag[i] > 0.0,
            "w entries must be strictly positive (index " + std::to_string(i) + ")");
  }
  std::vector<bool> covered(n, false);
  for (std::size_t r = 0; r < atoms.size(); ++r) {
    for (int v : atoms[r].members()) {
      require(v < n, "function " + std::to_string(r) + " references vertex " +
                         std::to_string(v) + " outside [0, n)");
      covered[v] = true;
    }
  }
  for (int i = 0; i < n; ++i) {
    require(covered[i], "vertex " + std::to_string(i) + " is not incident to any function");
  }
}

double evaluate_mask(const SubmodularAtom& atom, const std::vector<bool>& mask) {
  const std::size_t k = atom.size();
  if (atom.is_cut_kind()) {
    bool head_in = false;
    bool tail_out = false;
    for (std::size_t p = 0; p < k; ++p) {
      head_in = head_in || (mask[p] && atom.in_head(p));
      tail_out = tail_out || (!mask[p] && atom.in_tail(p));
    }
    return (head_in && tail_out) ? std::sqrt(atom.weight()) : 0.0;
  }
  const auto inside = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
  const double m = static_cast<double>(std::min(inside, k - inside));
  if (m == 0.0) return 0.0;
  return std::sqrt(atom.weight()) *
         std::pow(m / (static_cast<double>(k) / 2.0), atom.theta());
}

double evaluate(const SubmodularAtom& atom, std::span<const int> set) {
  std::vector<bool> mask(atom.size(), false);
  for (int v : set) {
    const int pos = atom.local_index(v);
    if (pos < 0) {
      throw std::domain_error("vertex " + std::to_string(v) +
                              " is not a member of the function");
    }
    mask[pos] = true;
  }
  return evaluate_mask(atom, mask);
}

Vector greedy_vertex(const SubmodularAtom& atom, std::span<const int> order) {
  Vector y = Vector::Zero(static_cast<Eigen::Index>(atom.size()));
  PrefixEvaluator prefix(atom);
  double previous = 0.0;
  for (int pos : order) {
    const double current = prefix.push(static_cast<std::size_t>(pos));
    y[pos] = current - previous;
    previous = current;
  }
  return y;
}

Vector greedy_lmo(const SubmodularAtom& atom, const Vector& direction_local) {
  const auto order = descending_order(atom, direction_local);
  return greedy_vertex(atom, order);
}

double lovasz_local(const SubmodularAtom& atom, const Vector& x_local) {
  return greedy_lmo(atom, x_local).dot(x_local);
}

Vector gather(const SubmodularAtom& atom, const Vector& dense) {
  const auto& members = atom.members();
  Vector local(static_cast<Eigen::Index>(members.size()));
  for (std::size_t k = 0; k < members.size(); ++k) local[k] = dense[members[k]];
  return local;
}

void scatter_add(const SubmodularAtom& atom, const Vector& local, Vector& dense) {
  const auto& members = atom.members();
  for (std::size_t k = 0; k < members.size(); ++k) dense[members[k]] += local[k];
}

double lovasz(const SubmodularAtom& atom, const Vector& x) {
  return lovasz_local(atom, gather(atom, x));
}

double primal_objective(const ProblemInstance& instance, const Vector& x) {
  const Vector diff = x - instance.a;
  double value = diff.cwiseProduct(diff).dot(instance.w_diag);
  for (const auto& atom : instance.atoms) {
    const double f = lovasz(atom, x);
    value += f * f;
  }
  return value;
}

Vector degree_vector(const ProblemInstance& instance, DegreeVariant variant) {
  Vector d = Vector::Zero(instance.n);
  for (const auto& atom : instance.atoms) {
    const double contribution =
        variant == DegreeVariant::IncidenceCount ? 1.0 : std::pow(atom.max_value(), 2);
    for (int v : atom.members()) d[v] += contribution;
  }
  for (int i = 0; i < instance.n; ++i) {
    if (d[i] <= 0.0) {
      throw std::invalid_argument("vertex " + std::to_string(i) +
                                  " has zero degree");
    }
  }
  return d;
}

}  // namespace qdsfm
