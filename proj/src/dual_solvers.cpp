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

#include "qdsfm/dual_solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qdsfm/rng.hpp"

namespace qdsfm {

namespace {

using Clock = std::chrono::steady_clock;

void check_config(const ProblemInstance& instance, const SolverConfig& config) {
  instance.validate();
  if (!(config.gap_tolerance > 0.0)) {
    throw std::invalid_argument("gap tolerance must be positive");
  }
  if (config.trace_every < 0) throw std::invalid_argument("trace_every must be >= 1");
  if (config.max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (config.projection.delta <= 0.0) {
    throw std::invalid_argument("projection delta must be positive");
  }
  // Surfaces an Exact request on a non-cut atom before any work is done.
  for (const auto& atom : instance.atoms) resolve_backend(config.projection_backend, atom);
}

class Tracer {
 public:
  Tracer(const ProblemInstance& instance, SolveReport& report)
      : instance_(instance), report_(report), start_(Clock::now()) {}

  // Records a row and returns the gap.
  double record(std::int64_t iteration, const DualState& state) {
    TraceRow row;
    row.iteration = iteration;
    row.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    row.dual_objective = dual_objective(instance_, state);
    row.duality_gap = duality_gap(instance_, state);
    report_.trace.push_back(row);
    return row.duality_gap;
  }

 private:
  const ProblemInstance& instance_;
  SolveReport& report_;
  Clock::time_point start_;
};

void finish(const ProblemInstance& instance, DualState state, double gap,
            bool converged, std::int64_t iterations, SolveReport& report) {
  state.y_sum = state.recompute_sum(instance);
  report.x = primal_from_dual(instance, state);
  report.final_gap = gap;
  report.converged = converged;
  report.iterations_run = iterations;
  report.state = std::move(state);
}

}  // namespace

DualState DualState::zeros(const ProblemInstance& instance) {
  DualState state;
  state.y.reserve(instance.atoms.size());
  for (const auto& atom : instance.atoms) {
    state.y.push_back(Vector::Zero(static_cast<Eigen::Index>(atom.size())));
  }
  state.phi = Vector::Zero(static_cast<Eigen::Index>(instance.atoms.size()));
  state.y_sum = Vector::Zero(instance.n);
  return state;
}

Vector DualState::recompute_sum(const ProblemInstance& instance) const {
  Vector sum = Vector::Zero(instance.n);
  for (std::size_t r = 0; r < instance.atoms.size(); ++r) {
    scatter_add(instance.atoms[r], y[r], sum);
  }
  return sum;
}

double dual_objective(const ProblemInstance& instance, const DualState& state) {
  const Vector diff = state.y_sum - 2.0 * instance.w_diag.cwiseProduct(instance.a);
  return diff.cwiseProduct(diff).cwiseQuotient(instance.w_diag).sum() +
         state.phi.squaredNorm();
}

Vector primal_from_dual(const ProblemInstance& instance, const DualState& state) {
  return instance.a - 0.5 * state.y_sum.cwiseQuotient(instance.w_diag);
}

double duality_gap(const ProblemInstance& instance, const DualState& state) {
  const Vector x = primal_from_dual(instance, state);
  const double primal = primal_objective(instance, x);
  const double a_norm2 = instance.a.cwiseProduct(instance.a).dot(instance.w_diag);
  const double dual = a_norm2 - dual_objective(instance, state) / 4.0;
  const double gap = primal - dual;
  if (gap >= 0.0) return gap;
  // Rounding in the two objectives scales with their magnitude.
  const double noise = 1e-12 * std::max({1.0, std::abs(primal), a_norm2});
  if (gap >= -noise) return 0.0;
  throw std::logic_error("negative duality gap " + std::to_string(gap) +
                         ": dual state is infeasible");
}

SolveReport rcd_solve(const ProblemInstance& instance, const SolverConfig& config) {
  check_config(instance, config);
  const std::size_t num_atoms = instance.atoms.size();
  const std::int64_t trace_every =
      config.trace_every > 0 ? config.trace_every
                             : std::max<std::int64_t>(1, static_cast<std::int64_t>(num_atoms));

  SolveReport report;
  Tracer tracer(instance, report);
  DualState state = DualState::zeros(instance);
  const Vector target = 2.0 * instance.w_diag.cwiseProduct(instance.a);
  const Vector w_inv = instance.w_diag.cwiseInverse();

  // Per-atom metric W^{-1} restricted to the members.
  std::vector<Vector> w_tilde;
  w_tilde.reserve(num_atoms);
  for (const auto& atom : instance.atoms) w_tilde.push_back(gather(atom, w_inv));

  Rng rng(config.rng_seed);
  double gap = tracer.record(0, state);
  std::int64_t iteration = 0;
  std::int64_t since_resum = 0;
  while (gap > config.gap_tolerance && iteration < config.max_iterations &&
         num_atoms > 0) {
    const auto r = static_cast<std::size_t>(rng.below(num_atoms));
    const auto& atom = instance.atoms[r];
    Vector& y_r = state.y[r];

    // 2Wa - sum_{r' != r} y_r' on S_r.
    const Vector local_target = gather(atom, target) - gather(atom, state.y_sum) + y_r;
    ProjectionResult projected = project(atom, local_target, w_tilde[r],
                                         config.projection_backend, config.projection);
    scatter_add(atom, projected.y - y_r, state.y_sum);
    y_r = std::move(projected.y);
    state.phi[static_cast<Eigen::Index>(r)] = projected.phi;

    ++iteration;
    if (++since_resum >= config.resum_every) {
      state.y_sum = state.recompute_sum(instance);
      since_resum = 0;
    }
    if (config.on_step) config.on_step(iteration, state);
    if (iteration % trace_every == 0 || iteration == config.max_iterations) {
      gap = tracer.record(iteration, state);
    }
  }
  finish(instance, std::move(state), gap, gap <= config.gap_tolerance, iteration, report);
  return report;
}

SolveReport ap_solve(const ProblemInstance& instance, const SolverConfig& config) {
  check_config(instance, config);
  const std::size_t num_atoms = instance.atoms.size();
  const std::int64_t trace_every = config.trace_every > 0 ? config.trace_every : 1;

  SolveReport report;
  Tracer tracer(instance, report);
  DualState state = DualState::zeros(instance);
  const Vector target = 2.0 * instance.w_diag.cwiseProduct(instance.a);
  const Vector psi = degree_vector(instance, DegreeVariant::IncidenceCount);
  const Vector psi_inv = psi.cwiseInverse();
  const Vector metric = psi.cwiseQuotient(instance.w_diag);

  std::vector<Vector> w_tilde;
  w_tilde.reserve(num_atoms);
  for (const auto& atom : instance.atoms) w_tilde.push_back(gather(atom, metric));

  double gap = tracer.record(0, state);
  std::int64_t iteration = 0;
  std::vector<ProjectionResult> projected(num_atoms);
  while (gap > config.gap_tolerance && iteration < config.max_iterations) {
    // lambda_r = y_r - Psi^{-1} (sum y - 2Wa) on S_r, i.e. the projection of
    // y onto the affine constraint sum_r lambda_r = 2Wa.
    const Vector correction = psi_inv.cwiseProduct(state.y_sum - target);
    for (std::size_t r = 0; r < num_atoms; ++r) {
      const auto& atom = instance.atoms[r];
      const Vector lambda = state.y[r] - gather(atom, correction);
      projected[r] = project(atom, lambda, w_tilde[r], config.projection_backend,
                             config.projection);
    }
    for (std::size_t r = 0; r < num_atoms; ++r) {
      state.y[r] = std::move(projected[r].y);
      state.phi[static_cast<Eigen::Index>(r)] = projected[r].phi;
    }
    state.y_sum = state.recompute_sum(instance);

    ++iteration;
    if (config.on_step) config.on_step(iteration, state);
    if (iteration % trace_every == 0 || iteration == config.max_iterations) {
      gap = tracer.record(iteration, state);
    }
  }
  finish(instance, std::move(state), gap, gap <= config.gap_tolerance, iteration, report);
  return report;
}

std::string_view to_string(Method method) {
  return method == Method::RCD ? "rcd" : "ap";
}

Method method_from_string(std::string_view name) {
  if (name == "rcd") return Method::RCD;
  if (name == "ap") return Method::AP;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

SolveReport solve(const ProblemInstance& instance, Method method, const SolverConfig& config) {
  return method == Method::RCD ? rcd_solve(instance, config) : ap_solve(instance, config);
}

double rho_squared(const ProblemInstance& instance, RhoBound bound) {
  if (bound == RhoBound::DegreeBound) {
    return 4.0 * degree_vector(instance, DegreeVariant::MaxSquared).sum();
  }
  double total = 0.0;
  for (const auto& atom : instance.atoms) {
    const double m = 2.0 * atom.max_value();
    total += m * m;
  }
  return total;
}

double mu_estimate(const ProblemInstance& instance, const Vector& w1, const Vector& w2,
                   RhoBound bound) {
  const double sum_w1 = w1.sum();
  const double first = sum_w1 * w2.cwiseInverse().sum();
  const double second = 2.25 * rho_squared(instance, bound) * sum_w1 + 1.0;
  return std::max(first, second);
}

}  // namespace qdsfm
