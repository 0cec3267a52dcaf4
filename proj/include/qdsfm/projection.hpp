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

// Projections onto the cone C = {(y, phi) : phi >= 0, y in phi * B} induced
// by an atom's base polytope B:
//
//   argmin_{(y, phi) in C}  h(y, phi) = ||y - a||_Wt^2 + phi^2
//
// with Wt a positive diagonal metric. All vectors are in the atom's local
// coordinates.

#ifndef QDSFM_PROJECTION_HPP_
#define QDSFM_PROJECTION_HPP_

#include <string_view>
#include <vector>

#include "qdsfm/submodular.hpp"

namespace qdsfm {

enum class ProjectionStatus { Converged, MaxIterations };

enum class Backend { Auto, Exact, MNP, FW };

std::string_view to_string(Backend backend);
Backend backend_from_string(std::string_view name);

struct ProjectionResult {
  Vector y;
  double phi = 0.0;
  double h_value = 0.0;
  ProjectionStatus status = ProjectionStatus::Converged;
  int major_loops = 0;
  int minor_loops = 0;
  // h after initialization and after each major loop (MNP) or iteration
  // (FW); filled only when ProjectionOptions::record_history is set.
  std::vector<double> h_history;
};

struct ProjectionOptions {
  double delta = 1e-10;
  // 0 selects the default cap: 100|S| major loops for MNP, 100|S|^2
  // iterations for FW.
  int max_iterations = 0;
  bool record_history = false;
};

// Extreme points q_i with nonnegative weights; y = sum lambda_i q_i and
// phi = sum lambda_i.
struct ActiveSet {
  std::vector<Vector> points;
  std::vector<double> coefficients;
};

double projection_objective(const Vector& y, double phi, const Vector& a,
                            const Vector& w_tilde);

// Unconstrained minimizer of ||sum alpha_i q_i - a||_Wt^2 + (sum alpha_i)^2
// via a column-pivoted QR of the augmented system.
Vector active_set_qp(const ActiveSet& set, const Vector& a, const Vector& w_tilde);

ProjectionResult conic_mnp(const SubmodularAtom& atom, const Vector& a,
                           const Vector& w_tilde, const ProjectionOptions& options = {});

ProjectionResult conic_fw(const SubmodularAtom& atom, const Vector& a,
                          const Vector& w_tilde, const ProjectionOptions& options = {});

// Exact O(|S| log |S|) projection for the cut kinds (graph edge, undirected
// and directed hyperedge). Throws std::invalid_argument for other kinds.
ProjectionResult exact_directed(const SubmodularAtom& atom, const Vector& a,
                                const Vector& w_tilde);

// Optimality residual: violation of the dual cone condition
// min_q <y - a, q>_Wt + phi >= 0 plus the perpendicularity defect
// |<y - a, y>_Wt + phi^2|. Zero exactly at the projection.
double check_kkt(const SubmodularAtom& atom, const Vector& a, const Vector& w_tilde,
                 const ProjectionResult& result);

// Exact for cut kinds, MNP otherwise.
Backend resolve_backend(Backend requested, const SubmodularAtom& atom);

ProjectionResult project(const SubmodularAtom& atom, const Vector& a,
                         const Vector& w_tilde, Backend backend,
                         const ProjectionOptions& options = {});

}  // namespace qdsfm

#endif  // QDSFM_PROJECTION_HPP_
