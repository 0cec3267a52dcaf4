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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdsfm/dual_solvers.hpp"
#include "qdsfm/hypergraph.hpp"
#include "qdsfm/reference_oracles.hpp"
#include "test_support.hpp"

using namespace qdsfm;
using namespace qdsfm::testing;

namespace {

double inf_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

ProblemInstance edge_instance() {
  ProblemInstance inst;
  inst.n = 2;
  inst.a = Vector{{1.0, 0.0}};
  inst.w_diag = Vector::Ones(2);
  inst.atoms = {SubmodularAtom::graph_edge(0, 1)};
  return inst;
}

SolverConfig tight_config(std::uint64_t seed = 0) {
  SolverConfig c;
  c.gap_tolerance = 1e-13;
  c.max_iterations = 200000;
  c.rng_seed = seed;
  c.projection.delta = 1e-12;
  return c;
}

}  // namespace

TEST_CASE("dual objective, primal recovery and gap at y = 0") {
  Rng rng(20);
  const auto inst = random_instance(rng, 6, 4, 4);
  const auto state = DualState::zeros(inst);
  CHECK(dual_objective(inst, state) ==
        doctest::Approx(4.0 * inst.a.cwiseProduct(inst.a).dot(inst.w_diag)));
  CHECK(primal_from_dual(inst, state) == inst.a);

  auto constant = inst;
  for (auto& atom : constant.atoms) {
    if (!atom.is_cut_kind()) atom = SubmodularAtom::undirected(atom.members());
  }
  constant.a = Vector::Constant(6, 0.4);
  CHECK(duality_gap(constant, DualState::zeros(constant)) == doctest::Approx(0.0));
}

TEST_CASE("dual objective of the single-edge example by hand") {
  const auto inst = edge_instance();
  auto state = DualState::zeros(inst);
  state.y[0] = Vector{{0.5, -0.5}};
  state.phi[0] = 0.5;
  state.y_sum = state.recompute_sum(inst);
  // ||(0.5, -0.5) - (2, 0)||^2 + 0.25
  CHECK(dual_objective(inst, state) == doctest::Approx(2.25 + 0.25 + 0.25));
  CHECK(inf_norm(primal_from_dual(inst, state) - Vector{{0.75, 0.25}}) < 1e-15);
}

TEST_CASE("duality gap rejects infeasible states") {
  const auto inst = edge_instance();
  auto state = DualState::zeros(inst);
  state.y[0] = Vector{{0.75, -0.75}};  // outside the cone with phi = 0; gap = -1/8
  state.y_sum = state.recompute_sum(inst);
  CHECK_THROWS_AS(duality_gap(inst, state), std::logic_error);
}

TEST_CASE("a = 0 stops before the first update") {
  Rng rng(21);
  auto inst = random_instance(rng, 5, 3, 4);
  inst.a = Vector::Zero(5);
  for (auto solver : {rcd_solve, ap_solve}) {
    const auto report = solver(inst, SolverConfig{});
    CHECK(report.converged);
    CHECK(report.iterations_run == 0);
    CHECK(report.final_gap == 0.0);
    CHECK(report.x.norm() == 0.0);
    REQUIRE(report.trace.size() == 1);
    CHECK(report.trace[0].iteration == 0);
  }
}

TEST_CASE("single edge: both solvers reach the closed form") {
  const auto inst = edge_instance();
  for (auto method : {Method::RCD, Method::AP}) {
    const auto report = solve(inst, method, tight_config());
    CHECK(report.converged);
    CHECK(inf_norm(report.x - Vector{{2.0 / 3.0, 1.0 / 3.0}}) <= 1e-8);
    CHECK(primal_objective(inst, report.x) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("frozen tiny optima from an independent conic solver") {
  // Minimizers from a separate interior-point solve of the primal.
  ProblemInstance a;
  a.n = 3;
  a.a = Vector{{1.0, -0.5, 0.3}};
  a.w_diag = Vector{{1.0, 2.0, 0.5}};
  a.atoms = {SubmodularAtom::undirected({0, 1, 2}), SubmodularAtom::directed({0, 1}, {0}, {1}, 2.0)};
  const Vector xa{{0.20370370370376562, -0.07777777777774486, 0.2037037037034481}};

  ProblemInstance b;
  b.n = 4;
  b.a = Vector{{0.9, -1.2, 0.4, 0.1}};
  b.w_diag = Vector{{1.0, 1.5, 0.7, 1.2}};
  b.atoms = {SubmodularAtom::cardinality({0, 1, 2, 3}, 1.0), SubmodularAtom::graph_edge(1, 3, 0.5)};
  const Vector xb{{0.5733598409541871, -0.7332007952286149, 0.01391650099434191,
                   0.01391650099391318}};

  for (auto method : {Method::RCD, Method::AP}) {
    CHECK(inf_norm(solve(a, method, tight_config()).x - xa) <= 1e-7);
    CHECK(inf_norm(solve(b, method, tight_config()).x - xb) <= 1e-7);
  }
  CHECK(primal_objective(a, xa) == doctest::Approx(1.2329629629630205).epsilon(1e-9));
  CHECK(primal_objective(b, xb) == doctest::Approx(1.252648111332082).epsilon(1e-9));
  CHECK(inf_norm(brute_qdsfm(a) - xa) <= 1e-7);
  CHECK(inf_norm(brute_qdsfm(b) - xb) <= 1e-7);
}

TEST_CASE("property: RCD and AP match the brute-force optimum") {
  Rng rng(22);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(5));
    const int r = 1 + static_cast<int>(rng.below(4));
    const auto inst = random_instance(rng, n, r, n);
    const Vector brute = brute_qdsfm(inst);
    const auto rcd = rcd_solve(inst, tight_config(trial));
    const auto ap = ap_solve(inst, tight_config(trial));
    CHECK(inf_norm(rcd.x - brute) <= 1e-5);
    CHECK(inf_norm(ap.x - brute) <= 1e-5);
    CHECK(inf_norm(rcd.x - ap.x) <= 1e-5);
  }
}

TEST_CASE("property: RCD never increases the dual objective") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(rng, 8, 6, 5);
    SolverConfig config = tight_config(trial);
    config.max_iterations = 300;
    double previous = dual_objective(inst, DualState::zeros(inst));
    int violations = 0;
    config.on_step = [&](std::int64_t, const DualState& state) {
      const double g = dual_objective(inst, state);
      if (g > previous + 1e-12 * std::max(1.0, previous)) ++violations;
      previous = g;
    };
    rcd_solve(inst, config);
    CHECK(violations == 0);
  }
}

TEST_CASE("property: iterates stay in the cones and y_sum tracks the sum") {
  Rng rng(24);
  const auto inst = random_instance(rng, 7, 5, 5);
  SolverConfig config = tight_config(3);
  config.max_iterations = 500;
  config.resum_every = 1'000'000;
  double drift = 0.0;
  bool feasible = true;
  config.on_step = [&](std::int64_t it, const DualState& state) {
    drift = std::max(drift, inf_norm(state.y_sum - state.recompute_sum(inst)));
    if (it % 25 != 0) return;
    for (std::size_t r = 0; r < inst.atoms.size(); ++r) {
      const double phi = state.phi[static_cast<Eigen::Index>(r)];
      if (phi < 0.0) feasible = false;
      if (phi > 1e-12) {
        feasible = feasible && in_base_polytope(inst.atoms[r], state.y[r] / phi, 1e-7);
      } else {
        feasible = feasible && state.y[r].norm() <= 1e-9;
      }
    }
  };
  for (auto method : {Method::RCD, Method::AP}) {
    drift = 0.0;
    solve(inst, method, config);
    CHECK(drift <= 1e-9);
  }
  CHECK(feasible);
}

TEST_CASE("property: fixed seeds give identical traces") {
  Rng rng(25);
  const auto inst = random_instance(rng, 10, 8, 6);
  for (auto method : {Method::RCD, Method::AP}) {
    SolverConfig config;
    config.rng_seed = 99;
    config.max_iterations = 400;
    config.trace_every = 7;
    const auto first = solve(inst, method, config);
    const auto second = solve(inst, method, config);
    REQUIRE(first.trace.size() == second.trace.size());
    for (std::size_t i = 0; i < first.trace.size(); ++i) {
      CHECK(first.trace[i].iteration == second.trace[i].iteration);
      CHECK(first.trace[i].dual_objective == second.trace[i].dual_objective);
      CHECK(first.trace[i].duality_gap == second.trace[i].duality_gap);
    }
    CHECK(first.x == second.x);
  }
}

TEST_CASE("trace cadence and iteration cap") {
  Rng rng(26);
  const auto inst = random_instance(rng, 10, 6, 6);
  SolverConfig config;
  config.gap_tolerance = 1e-300;
  config.max_iterations = 50;
  const auto report = rcd_solve(inst, config);
  CHECK_FALSE(report.converged);
  CHECK(report.iterations_run == 50);
  // Default cadence is R = 6 for RCD plus the final iteration.
  CHECK(report.trace.front().iteration == 0);
  CHECK(report.trace[1].iteration == 6);
  CHECK(report.trace.back().iteration == 50);
  for (std::size_t i = 1; i < report.trace.size(); ++i) {
    CHECK(report.trace[i].iteration > report.trace[i - 1].iteration);
  }
}

TEST_CASE("configuration errors") {
  Rng rng(27);
  auto inst = random_instance(rng, 6, 3, 4);
  inst.atoms.push_back(SubmodularAtom::cardinality({0, 1, 2}, 0.5));
  SolverConfig config;
  config.projection_backend = Backend::Exact;
  CHECK_THROWS_AS(rcd_solve(inst, config), std::invalid_argument);
  CHECK_THROWS_AS(ap_solve(inst, config), std::invalid_argument);
  SolverConfig bad_tol;
  bad_tol.gap_tolerance = 0.0;
  CHECK_THROWS_AS(rcd_solve(inst, bad_tol), std::invalid_argument);
  CHECK_THROWS_AS(method_from_string("sgd"), std::invalid_argument);
}

TEST_CASE("cardinality benchmark converges within 300R iterations") {
  CardinalityParams params;
  params.theta = 1.0;
  const auto inst = generate_cardinality_bench(params, 4);
  SolverConfig config;
  config.max_iterations = 300 * 100;
  config.projection_backend = Backend::MNP;
  config.projection.delta = 1e-12;
  const auto report = rcd_solve(inst, config);
  CHECK(report.converged);
  CHECK(report.final_gap <= 1e-9);
}

TEST_CASE("mu and rho diagnostics") {
  const int n = 5;
  const int r = 3;
  ProblemInstance inst;
  inst.n = n;
  inst.a = Vector::Zero(n);
  inst.w_diag = Vector::Ones(n);
  inst.atoms = {SubmodularAtom::undirected({0, 1, 2}), SubmodularAtom::undirected({2, 3, 4}),
                SubmodularAtom::undirected({0, 1, 2, 3, 4})};
  const Vector ones = Vector::Ones(n);
  // Degree bound: rho^2 <= 4 sum_i D_ii with D_ii = incident weights.
  const double sum_d = 3 + 3 + 5;
  CHECK(rho_squared(inst, RhoBound::DegreeBound) == doctest::Approx(4.0 * sum_d));
  CHECK(mu_estimate(inst, ones, ones) ==
        doctest::Approx(std::max<double>(n * n, 9.0 * n * sum_d + 1.0)));
  // Exact: each unit cut atom contributes (2 max F)^2 = 4.
  CHECK(rho_squared(inst, RhoBound::Exact) == doctest::Approx(4.0 * r));
  CHECK(mu_estimate(inst, ones, ones, RhoBound::Exact) ==
        doctest::Approx(std::max<double>(n * n, 9.0 * r * n + 1.0)));
  // With a tiny W2 the first term dominates.
  const Vector small = Vector::Constant(n, 1e-3);
  CHECK(mu_estimate(inst, ones, small, RhoBound::Exact) == doctest::Approx(n * n * 1e3));
}

TEST_CASE("rho exact bound dominates observed dual norms") {
  // ||y_r||_1 <= 2 max F_r on the base polytope, so sum_r ||y_r||_1^2 <= rho^2.
  Rng rng(28);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(rng, 6, 4, 5);
    double total = 0.0;
    for (const auto& atom : inst.atoms) {
      const Vector q = greedy_lmo(atom, random_normal(rng, static_cast<Eigen::Index>(atom.size())));
      total += std::pow(q.lpNorm<1>(), 2);
    }
    CHECK(total <= rho_squared(inst, RhoBound::Exact) + 1e-12);
  }
}
