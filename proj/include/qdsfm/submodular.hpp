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

#ifndef QDSFM_SUBMODULAR_HPP_
#define QDSFM_SUBMODULAR_HPP_

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace qdsfm {

using Vector = Eigen::VectorXd;

// Per-atom vectors are stored in "local" coordinates: entry k refers to
// atom.members()[k]. Dense vectors have length N.

enum class AtomKind {
  GraphEdge,
  UndirectedHyperedge,
  DirectedHyperedge,
  CardinalityTheta,
};

std::string_view to_string(AtomKind kind);
AtomKind atom_kind_from_string(std::string_view name);

// One decomposed submodular function F_r on an incidence set S_r.
//
// All kinds are scaled by sqrt(weight):
//   cut kinds:        F(S) = sqrt(w)  if S separates the incidence set, else 0
//   CardinalityTheta: F(S) = sqrt(w) * min(|S|, |S_r \ S|)^theta / (|S_r|/2)^theta
// Every kind satisfies F(empty) = F(S_r) = 0.
class SubmodularAtom {
 public:
  static SubmodularAtom graph_edge(int i, int j, double weight = 1.0);
  static SubmodularAtom undirected(std::vector<int> members, double weight = 1.0);
  static SubmodularAtom directed(std::vector<int> members, std::vector<int> head,
                                 std::vector<int> tail, double weight = 1.0);
  static SubmodularAtom cardinality(std::vector<int> members, double theta,
                                    double weight = 1.0);

  AtomKind kind() const { return kind_; }
  double weight() const { return weight_; }
  double theta() const { return theta_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<int>& members() const { return members_; }
  // Global indices of the head/tail sets (DirectedHyperedge only).
  const std::vector<int>& head() const { return head_; }
  const std::vector<int>& tail() const { return tail_; }

  // Local-position membership flags. For the undirected cut kinds every
  // member is both head and tail.
  bool in_head(std::size_t local) const { return in_head_[local]; }
  bool in_tail(std::size_t local) const { return in_tail_[local]; }
  bool is_cut_kind() const { return kind_ != AtomKind::CardinalityTheta; }

  // Local position of a global vertex, or -1.
  int local_index(int vertex) const;

  // max_S F(S).
  double max_value() const;

  bool operator==(const SubmodularAtom& other) const;

 private:
  SubmodularAtom() = default;
  void finalize();

  AtomKind kind_ = AtomKind::GraphEdge;
  double weight_ = 1.0;
  double theta_ = 1.0;
  std::vector<int> members_;
  std::vector<int> head_;
  std::vector<int> tail_;
  std::vector<bool> in_head_;
  std::vector<bool> in_tail_;
};

// The QDSFM instance: min_x ||x - a||_W^2 + sum_r f_r(x)^2.
struct ProblemInstance {
  int n = 0;
  Vector a;
  Vector w_diag;
  std::vector<SubmodularAtom> atoms;

  // Throws std::invalid_argument on any violated invariant.
  void validate() const;
  bool operator==(const ProblemInstance& other) const = default;
};

enum class DegreeVariant { IncidenceCount, MaxSquared };

// F_r(S) for S given in global indices. Throws std::domain_error when S is
// not a subset of the members.
double evaluate(const SubmodularAtom& atom, std::span<const int> set);

// F_r evaluated on a local membership mask.
double evaluate_mask(const SubmodularAtom& atom, const std::vector<bool>& mask);

// Lovász extension on a local vector (length atom.size()).
double lovasz_local(const SubmodularAtom& atom, const Vector& x_local);

// Lovász extension on a dense length-N vector; entries off the members are
// ignored.
double lovasz(const SubmodularAtom& atom, const Vector& x);

// Greedy maximizer of <y, direction> over the base polytope. Sorting is
// descending with ties broken by ascending vertex index.
Vector greedy_lmo(const SubmodularAtom& atom, const Vector& direction_local);

// Greedy vertex for an explicit ordering of local positions.
Vector greedy_vertex(const SubmodularAtom& atom, std::span<const int> order);

Vector gather(const SubmodularAtom& atom, const Vector& dense);
void scatter_add(const SubmodularAtom& atom, const Vector& local, Vector& dense);

double primal_objective(const ProblemInstance& instance, const Vector& x);

Vector degree_vector(const ProblemInstance& instance, DegreeVariant variant);

}  // namespace qdsfm

#endif  // QDSFM_SUBMODULAR_HPP_
