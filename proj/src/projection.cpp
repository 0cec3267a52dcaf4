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

#include "qdsfm/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/QR>

namespace qdsfm {

namespace {

constexpr double kPruneThreshold = 1e-14;
constexpr double kDependenceThreshold = 1e-12;

Eigen::MatrixXd augmented_matrix(const std::vector<Vector>& points,
                                 const Vector& sqrt_w) {
  const Eigen::Index m = sqrt_w.size();
  Eigen::MatrixXd mat(m + 1, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    mat.col(static_cast<Eigen::Index>(i)).head(m) = sqrt_w.cwiseProduct(points[i]);
    mat(m, static_cast<Eigen::Index>(i)) = 1.0;
  }
  return mat;
}

bool is_dependent(const std::vector<Vector>& points, const Vector& q,
                  const Vector& sqrt_w) {
  std::vector<Vector> all = points;
  all.push_back(q);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(augmented_matrix(all, sqrt_w));
  qr.setThreshold(kDependenceThreshold);
  return qr.rank() < static_cast<Eigen::Index>(all.size());
}

void rebuild(const ActiveSet& set, Eigen::Index dim, Vector& y, double& phi) {
  y = Vector::Zero(dim);
  phi = 0.0;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    y += set.coefficients[i] * set.points[i];
    phi += set.coefficients[i];
  }
}

void prune(ActiveSet& set) {
  std::size_t out = 0;
  for (std::size_t i = 0; i < set.points.size(); ++i) {
    if (set.coefficients[i] > kPruneThreshold) {
      set.points[out] = std::move(set.points[i]);
      set.coefficients[out] = set.coefficients[i];
      ++out;
    }
  }
  set.points.resize(out);
  set.coefficients.resize(out);
}

// argmin_{q in B} <y - a, q>_Wt, returned together with the termination
// quantity <y - a, q>_Wt + phi.
std::pair<Vector, double> descent_vertex(const SubmodularAtom& atom, const Vector& y,
                                         double phi, const Vector& a,
                                         const Vector& w_tilde) {
  const Vector grad = w_tilde.cwiseProduct(y - a);
  Vector q = greedy_lmo(atom, -grad);
  const double gap = grad.dot(q) + phi;
  return {std::move(q), gap};
}

int default_cap(const ProjectionOptions& options, std::size_t fallback) {
  return options.max_iterations > 0 ? options.max_iterations
                                    : static_cast<int>(fallback);
}

}  // namespace

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::Auto: return "auto";
    case Backend::Exact: return "exact";
    case Backend::MNP: return "mnp";
    case Backend::FW: return "fw";
  }
  return "unknown";
}

Backend backend_from_string(std::string_view name) {
  for (Backend b : {Backend::Auto, Backend::Exact, Backend::MNP, Backend::FW}) {
    if (to_string(b) == name) return b;
  }
  throw std::invalid_argument("unknown projection backend '" + std::string(name) + "'");
}

double projection_objective(const Vector& y, double phi, const Vector& a,
                            const Vector& w_tilde) {
  const Vector diff = y - a;
  return diff.cwiseProduct(diff).dot(w_tilde) + phi * phi;
}

Vector active_set_qp(const ActiveSet& set, const Vector& a, const Vector& w_tilde) {
  const Vector sqrt_w = w_tilde.cwiseSqrt();
  std::vector<Vector> points = set.points;
  while (!points.empty()) {
    const Eigen::MatrixXd mat = augmented_matrix(points, sqrt_w);
    Vector rhs = Vector::Zero(mat.rows());
    rhs.head(a.size()) = sqrt_w.cwiseProduct(a);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mat);
    qr.setThreshold(kDependenceThreshold);
    if (qr.rank() == static_cast<Eigen::Index>(points.size())) {
      Vector alpha = Vector::Zero(static_cast<Eigen::Index>(set.points.size()));
      alpha.head(static_cast<Eigen::Index>(points.size())) = qr.solve(rhs);
      return alpha;
    }
    // Newest point is dependent on the rest: it gets a zero coefficient.
    points.pop_back();
  }
  return Vector::Zero(static_cast<Eigen::Index>(set.points.size()));
}

ProjectionResult conic_mnp(const SubmodularAtom& atom, const Vector& a,
                           const Vector& w_tilde, const ProjectionOptions& options) {
  const Eigen::Index dim = static_cast<Eigen::Index>(atom.size());
  const int cap = default_cap(options, 100 * atom.size());
  const Vector sqrt_w = w_tilde.cwiseSqrt();

  ProjectionResult result;
  ActiveSet set;
  {
    const Vector wa = w_tilde.cwiseProduct(a);
    Vector q1 = greedy_lmo(atom, wa);
    const double lambda = wa.dot(q1) / (1.0 + q1.cwiseProduct(q1).dot(w_tilde));
    if (lambda > 0.0) {
      set.points.push_back(std::move(q1));
      set.coefficients.push_back(lambda);
    }
  }
  Vector y;
  double phi = 0.0;
  rebuild(set, dim, y, phi);
  double h = projection_objective(y, phi, a, w_tilde);
  if (options.record_history) result.h_history.push_back(h);

  while (true) {
    auto [q, gap] = descent_vertex(atom, y, phi, a, w_tilde);
    if (gap >= -options.delta) {
      result.status = ProjectionStatus::Converged;
      break;
    }
    if (result.major_loops >= cap) {
      result.status = ProjectionStatus::MaxIterations;
      break;
    }
    ++result.major_loops;
    if (is_dependent(set.points, q, sqrt_w)) {
      // No representable progress left in floating point.
      result.status = ProjectionStatus::Converged;
      break;
    }

    const ActiveSet before = set;
    set.points.push_back(std::move(q));
    set.coefficients.push_back(0.0);
    bool stalled = false;
    for (bool first = true;; first = false) {
      const Vector alpha = active_set_qp(set, a, w_tilde);
      if ((alpha.array() >= 0.0).all()) {
        for (std::size_t i = 0; i < set.coefficients.size(); ++i) {
          set.coefficients[i] = alpha[static_cast<Eigen::Index>(i)];
        }
        break;
      }
      double theta = std::numeric_limits<double>::infinity();
      std::size_t leaving = 0;
      for (std::size_t i = 0; i < set.coefficients.size(); ++i) {
        const double ai = alpha[static_cast<Eigen::Index>(i)];
        if (ai < 0.0) {
          const double li = set.coefficients[i];
          const double t = li / (li - ai);
          if (t < theta) {
            theta = t;
            leaving = i;
          }
        }
      }
      if (first && theta == 0.0 && leaving + 1 == set.points.size()) {
        stalled = true;
        break;
      }
      ++result.minor_loops;
      for (std::size_t i = 0; i < set.coefficients.size(); ++i) {
        set.coefficients[i] = theta * alpha[static_cast<Eigen::Index>(i)] +
                              (1.0 - theta) * set.coefficients[i];
      }
      set.coefficients[leaving] = 0.0;
      prune(set);
      if (set.points.empty()) break;
    }
    if (stalled) {
      set = before;
      result.status = ProjectionStatus::Converged;
      break;
    }
    prune(set);
    Vector y_next;
    double phi_next = 0.0;
    rebuild(set, dim, y_next, phi_next);
    const double h_next = projection_objective(y_next, phi_next, a, w_tilde);
    if (!(h_next < h)) {
      // Rounding prevents further descent; keep the previous iterate.
      set = before;
      if (options.record_history) result.h_history.push_back(h);
      result.status = ProjectionStatus::Converged;
      break;
    }
    y = std::move(y_next);
    phi = phi_next;
    h = h_next;
    if (options.record_history) result.h_history.push_back(h);
  }

  result.y = std::move(y);
  result.phi = phi;
  result.h_value = h;
  return result;
}

ProjectionResult conic_fw(const SubmodularAtom& atom, const Vector& a,
                          const Vector& w_tilde, const ProjectionOptions& options) {
  const Eigen::Index dim = static_cast<Eigen::Index>(atom.size());
  const int cap = default_cap(options, 100 * atom.size() * atom.size());

  ProjectionResult result;
  Vector y = Vector::Zero(dim);
  double phi = 0.0;
  double h = projection_objective(y, phi, a, w_tilde);

  while (true) {
    if (options.record_history) result.h_history.push_back(h);
    auto [q, gap] = descent_vertex(atom, y, phi, a, w_tilde);
    if (gap >= -options.delta) {
      result.status = ProjectionStatus::Converged;
      break;
    }
    if (result.major_loops >= cap) {
      result.status = ProjectionStatus::MaxIterations;
      break;
    }
    ++result.major_loops;

    // min_{g1, g2 >= 0} g^T G g - 2 c^T g over the cone of {y, q}.
    const Vector wy = w_tilde.cwiseProduct(y);
    const Vector wq = w_tilde.cwiseProduct(q);
    const double g11 = y.dot(wy) + phi * phi;
    const double g12 = q.dot(wy) + phi;
    const double g22 = q.dot(wq) + 1.0;
    const double c1 = wy.dot(a);
    const double c2 = wq.dot(a);
    auto value = [&](double t1, double t2) {
      return g11 * t1 * t1 + 2.0 * g12 * t1 * t2 + g22 * t2 * t2 - 2.0 * (c1 * t1 + c2 * t2);
    };
    double best1 = 0.0, best2 = 0.0, best = 0.0;
    auto consider = [&](double t1, double t2) {
      if (t1 < 0.0 || t2 < 0.0) return;
      const double v = value(t1, t2);
      if (v < best) {
        best = v;
        best1 = t1;
        best2 = t2;
      }
    };
    if (g11 > 0.0) consider(std::max(0.0, c1 / g11), 0.0);
    consider(0.0, std::max(0.0, c2 / g22));
    const double det = g11 * g22 - g12 * g12;
    if (det > 1e-14 * std::max(1.0, g11 * g22)) {
      consider((g22 * c1 - g12 * c2) / det, (g11 * c2 - g12 * c1) / det);
    }
    y = best1 * y + best2 * q;
    phi = best1 * phi + best2;
    h = projection_objective(y, phi, a, w_tilde);
  }

  result.y = std::move(y);
  result.phi = phi;
  result.h_value = h;
  return result;
}

ProjectionResult exact_directed(const SubmodularAtom& atom, const Vector& a,
                                const Vector& w_tilde) {
  if (!atom.is_cut_kind()) {
    throw std::invalid_argument("exact projection requires a graph edge or hyperedge");
  }
  const std::size_t k = atom.size();
  const auto& members = atom.members();
  const double c = atom.weight();

  // Primal form: min_z ||z - b||_W^2 + c (max_H z - min_T z)_+^2 with
  // W = Wt^{-1}, b = W^{-1} a / 2; then y = a - 2 W z, phi = 2 f(z).
  const Vector b = 0.5 * w_tilde.cwiseProduct(a);
  const Vector w = w_tilde.cwiseInverse();

  std::vector<int> heads, tails;
  for (std::size_t p = 0; p < k; ++p) {
    if (atom.in_head(p)) heads.push_back(static_cast<int>(p));
    if (atom.in_tail(p)) tails.push_back(static_cast<int>(p));
  }
  std::sort(heads.begin(), heads.end(), [&](int p, int q) {
    return b[p] != b[q] ? b[p] > b[q] : members[p] < members[q];
  });
  std::sort(tails.begin(), tails.end(), [&](int p, int q) {
    return b[p] != b[q] ? b[p] < b[q] : members[p] < members[q];
  });

  ProjectionResult result;
  result.status = ProjectionStatus::Converged;
  double gamma = b[heads.front()];
  double delta = b[tails.front()];
  if (gamma <= delta) {
    // Inactive: z = b, hence y = 0 and phi = 0.
    result.y = Vector::Zero(static_cast<Eigen::Index>(k));
    result.phi = 0.0;
    result.h_value = projection_objective(result.y, 0.0, a, w_tilde);
    return result;
  }

  // s is the common value of sum_{S_H} W (b - gamma) and
  // sum_{S_T} W (delta - b); the root satisfies c (gamma - delta) = s.
  std::size_t n_head = 1, n_tail = 1;
  double w_head = w[heads.front()];
  double w_tail = w[tails.front()];
  double s = 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    const double step = (c * (gamma - delta) - s) / (1.0 + c / w_head + c / w_tail);
    const double to_head =
        n_head < heads.size() ? (gamma - b[heads[n_head]]) * w_head : inf;
    const double to_tail =
        n_tail < tails.size() ? (b[tails[n_tail]] - delta) * w_tail : inf;
    if (step <= std::min(to_head, to_tail)) {
      s += step;
      gamma -= step / w_head;
      delta += step / w_tail;
      break;
    }
    ++result.major_loops;
    if (to_head <= to_tail) {
      s += to_head;
      gamma = b[heads[n_head]];
      delta += to_head / w_tail;
      w_head += w[heads[n_head]];
      ++n_head;
    } else {
      s += to_tail;
      delta = b[tails[n_tail]];
      gamma -= to_tail / w_head;
      w_tail += w[tails[n_tail]];
      ++n_tail;
    }
  }

  Vector z = b;
  for (std::size_t i = 0; i < n_head; ++i) z[heads[i]] = gamma;
  for (std::size_t i = 0; i < n_tail; ++i) z[tails[i]] = delta;

  result.y = a - 2.0 * w.cwiseProduct(z);
  result.phi = 2.0 * std::sqrt(c) * std::max(0.0, gamma - delta);
  result.h_value = projection_objective(result.y, result.phi, a, w_tilde);
  return result;
}

double check_kkt(const SubmodularAtom& atom, const Vector& a, const Vector& w_tilde,
                 const ProjectionResult& result) {
  const auto [q, gap] = descent_vertex(atom, result.y, result.phi, a, w_tilde);
  (void)q;
  const double perpendicular =
      w_tilde.cwiseProduct(result.y - a).dot(result.y) + result.phi * result.phi;
  return std::max(0.0, -gap) + std::abs(perpendicular);
}

Backend resolve_backend(Backend requested, const SubmodularAtom& atom) {
  if (requested == Backend::Auto) {
    return atom.is_cut_kind() ? Backend::Exact : Backend::MNP;
  }
  if (requested == Backend::Exact && !atom.is_cut_kind()) {
    throw std::invalid_argument(
        "exact backend only supports graph edges and (un)directed hyperedges");
  }
  return requested;
}

ProjectionResult project(const SubmodularAtom& atom, const Vector& a,
                         const Vector& w_tilde, Backend backend,
                         const ProjectionOptions& options) {
  switch (resolve_backend(backend, atom)) {
    case Backend::Exact: return exact_directed(atom, a, w_tilde);
    case Backend::FW: return conic_fw(atom, a, w_tilde, options);
    case Backend::MNP:
    case Backend::Auto: break;
  }
  return conic_mnp(atom, a, w_tilde, options);
}

}  // namespace qdsfm
