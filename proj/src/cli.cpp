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

#include "qdsfm/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qdsfm/dual_solvers.hpp"
#include "qdsfm/hypergraph.hpp"
#include "qdsfm/io.hpp"
#include "qdsfm/projection.hpp"

namespace qdsfm {

namespace {

struct SolverFlags {
  std::string method = "rcd";
  std::string backend = "auto";
  double tol = 1e-9;
  std::int64_t max_iters = 1'000'000;
  std::uint64_t seed = 0;
  std::int64_t trace_every = 0;

  void attach(CLI::App* app, bool with_method = true) {
    if (with_method) {
      app->add_option("--method", method, "Outer solver")
          ->check(CLI::IsMember({"rcd", "ap"}))
          ->capture_default_str();
    }
    app->add_option("--backend", backend, "Inner projection")
        ->check(CLI::IsMember({"auto", "exact", "mnp", "fw"}))
        ->capture_default_str();
    app->add_option("--tol", tol, "Duality gap tolerance")->capture_default_str();
    app->add_option("--max-iters", max_iters, "Iteration cap")->capture_default_str();
    app->add_option("--seed", seed, "Random seed")->capture_default_str();
    app->add_option("--trace-every", trace_every,
                    "Gap evaluation period (0: R for rcd, 1 for ap)")
        ->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig c;
    c.gap_tolerance = tol;
    c.max_iterations = max_iters;
    c.rng_seed = seed;
    c.projection_backend = backend_from_string(backend);
    c.trace_every = trace_every;
    return c;
  }
};

std::string join(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += " ";
    s += format_real(v[i]);
  }
  return s;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += " ";
    s += std::to_string(v[i]);
  }
  return s;
}

std::string fixed(double value, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, value);
  return buffer;
}

std::string sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.3e", value);
  return buffer;
}

void print_report(std::ostream& out, const SolveReport& report) {
  out << "iterations " << report.iterations_run << "\n"
      << "duality_gap " << sci(report.final_gap) << "\n"
      << "converged " << (report.converged ? "yes" : "no") << "\n";
}

int cmd_solve(const std::string& instance_path, const SolverFlags& flags,
              const std::string& trace_path, const std::string& solution_path,
              std::ostream& out) {
  const ProblemInstance instance = parse_instance(instance_path);
  const SolveReport report =
      solve(instance, method_from_string(flags.method), flags.config());
  // Outputs are written even when the solver stopped early.
  if (!trace_path.empty()) write_trace(report.trace, trace_path);
  if (!solution_path.empty()) write_vector(report.x, solution_path);
  out << "objective " << format_real(primal_objective(instance, report.x)) << "\n";
  print_report(out, report);
  return report.converged ? kExitOk : kExitNonconvergence;
}

int cmd_project(const std::string& instance_path, int atom_index, const std::string& backend,
                double delta, std::ostream& out) {
  const ProblemInstance instance = parse_instance(instance_path);
  if (atom_index < 0 || atom_index >= static_cast<int>(instance.atoms.size())) {
    throw std::invalid_argument("--atom " + std::to_string(atom_index) + " out of range");
  }
  const SubmodularAtom& atom = instance.atoms[static_cast<std::size_t>(atom_index)];
  const Vector a = gather(atom, instance.a);
  const Vector w_tilde = gather(atom, instance.w_diag);
  ProjectionOptions options;
  options.delta = delta;
  const ProjectionResult result = project(atom, a, w_tilde, backend_from_string(backend), options);
  out << "backend " << to_string(resolve_backend(backend_from_string(backend), atom)) << "\n"
      << "y " << join(result.y) << "\n"
      << "phi " << format_real(result.phi) << "\n"
      << "h=" << result.h_value << "\n"
      << "kkt " << sci(check_kkt(atom, a, w_tilde, result)) << "\n";
  return result.status == ProjectionStatus::Converged ? kExitOk : kExitNonconvergence;
}

int cmd_pagerank(const std::string& hypergraph_path, double alpha, int source,
                 const std::string& p0_path, bool sweep, const SolverFlags& flags,
                 const std::string& output_path, std::ostream& out) {
  const Hypergraph hg = parse_hypergraph(hypergraph_path);
  Vector p0;
  if (!p0_path.empty()) {
    p0 = read_vector(p0_path);
    if (p0.size() != hg.n) throw ParseError(p0_path + ": expected " + std::to_string(hg.n) + " entries");
  } else {
    if (source < 0 || source >= hg.n) throw std::invalid_argument("--source out of range");
    p0 = Vector::Zero(hg.n);
    p0[source] = 1.0;
  }
  const PageRankResult result = pagerank(hg, alpha, p0, flags.config());
  if (!output_path.empty()) {
    write_vector(result.p, output_path);
  } else {
    out << "p " << join(result.p) << "\n";
  }
  print_report(out, result.report);
  if (sweep) {
    const SweepResult cut = sweep_cut(hg, result.p);
    out << "sweep_set " << join(cut.best_set) << "\n"
        << "sweep_conductance " << format_real(cut.best_conductance) << "\n";
  }
  return result.report.converged ? kExitOk : kExitNonconvergence;
}

struct SslFlags {
  std::string preset = "synthetic";
  std::string hypergraph;
  int labels = 3;
  double beta = 0.02;
  int seeds = 1;
  std::string denominator = "min";
};

int cmd_ssl(const SslFlags& ssl, const SolverFlags& flags, std::ostream& out) {
  Hypergraph file_hg;
  if (ssl.preset == "file") {
    if (ssl.hypergraph.empty()) throw std::invalid_argument("--preset file needs --hypergraph");
    file_hg = parse_hypergraph(ssl.hypergraph);
    if (file_hg.truth.empty()) throw ParseError(ssl.hypergraph + ": truth: missing");
  }
  if (ssl.seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  const auto denominator =
      ssl.denominator == "max" ? CheegerDenominator::Max : CheegerDenominator::Min;

  std::vector<double> errors;
  double score_sum = 0.0;
  bool all_converged = true;
  for (int s = 0; s < ssl.seeds; ++s) {
    const std::uint64_t seed = flags.seed + static_cast<std::uint64_t>(s);
    Hypergraph hg;
    std::vector<int> labels;
    if (ssl.preset == "file") {
      hg = file_hg;
      labels = sample_labels(hg.truth, ssl.labels, seed);
    } else {
      ClusterParams params;
      params.labels_per_cluster = ssl.labels;
      ClusterData data = generate_cluster_hypergraph(params, seed);
      hg = std::move(data.hg);
      labels = std::move(data.labels);
    }
    const Vector w_norm = hg.degrees();
    SslOptions options;
    options.beta = ssl.beta;
    options.method = method_from_string(flags.method);
    options.solver = flags.config();
    options.solver.rng_seed = seed;
    const auto start = std::chrono::steady_clock::now();
    const SslResult result = ssl_solve(hg, labels, w_norm, options);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const CheegerResult cheeger = cheeger_classify(hg, result.scores, w_norm, denominator);
    const double error = classification_error(cheeger.predicted, hg.truth);
    const double sign_error = classification_error(result.predicted, hg.truth);
    errors.push_back(error);
    score_sum += cheeger.score;
    all_converged = all_converged && result.report.converged;
    out << "seed " << seed << " error " << fixed(100.0 * error, 2) << "% sign_error "
        << fixed(100.0 * sign_error, 2) << "% cheeger_100c " << fixed(100.0 * cheeger.score, 3)
        << " gap " << sci(result.report.final_gap) << " iterations "
        << result.report.iterations_run << " seconds " << fixed(seconds, 3) << "\n";
  }
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t k = sorted.size();
  const double median = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
  double mean = 0.0;
  for (double e : errors) mean += e;
  mean /= static_cast<double>(k);
  out << "mean_error " << fixed(100.0 * mean, 2) << "%\n"
      << "median_error " << fixed(100.0 * median, 2) << "%\n"
      << "mean_cheeger_100c " << fixed(100.0 * score_sum / static_cast<double>(k), 3) << "\n";
  return all_converged ? kExitOk : kExitNonconvergence;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error(path + ": cannot open for writing");
  file << text;
  if (!file) throw std::runtime_error(path + ": write failed");
}

int cmd_gen(const std::string& preset, std::uint64_t seed, double theta, int labels,
            const std::string& output, std::ostream& out) {
  if (preset == "sec44") {
    CardinalityParams params;
    params.theta = theta;
    emit(instance_to_json(generate_cardinality_bench(params, seed)).dump(1) + "\n", output, out);
  } else {
    ClusterParams params;
    params.labels_per_cluster = labels;
    emit(hypergraph_to_json(generate_cluster_hypergraph(params, seed).hg).dump() + "\n", output,
         out);
  }
  return kExitOk;
}

int cmd_bench(const std::string& instance_path, double theta, const std::string& methods,
              const std::string& backends, const SolverFlags& flags, const std::string& out_dir,
              std::ostream& out) {
  const ProblemInstance instance = instance_path.empty()
                                       ? [&] {
                                           CardinalityParams params;
                                           params.theta = theta;
                                           return generate_cardinality_bench(params, flags.seed);
                                         }()
                                       : parse_instance(instance_path);
  std::filesystem::create_directories(out_dir);
  auto split = [](const std::string& list) {
    std::vector<std::string> items;
    std::stringstream stream(list);
    for (std::string item; std::getline(stream, item, ',');) {
      if (!item.empty()) items.push_back(item);
    }
    return items;
  };
  bool all_converged = true;
  for (const auto& method_name : split(methods)) {
    const Method method = method_from_string(method_name);
    for (const auto& backend_name : split(backends)) {
      SolverConfig config = flags.config();
      config.projection_backend = backend_from_string(backend_name);
      const std::string cell = method_name + "_" + backend_name;
      try {
        for (const auto& atom : instance.atoms) resolve_backend(config.projection_backend, atom);
      } catch (const std::invalid_argument&) {
        out << cell << " skipped (backend does not apply)\n";
        continue;
      }
      const SolveReport report = solve(instance, method, config);
      const std::string path = (std::filesystem::path(out_dir) / (cell + ".csv")).string();
      write_trace(report.trace, path);
      all_converged = all_converged && report.converged;
      out << cell << " gap " << sci(report.final_gap) << " iterations " << report.iterations_run
          << " seconds " << fixed(report.trace.back().elapsed_seconds, 3) << " trace " << path
          << "\n";
    }
  }
  return all_converged ? kExitOk : kExitNonconvergence;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic decomposable submodular minimization", "qdsfm"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string trace_path;
  std::string solution_path;
  SolverFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a QDSFM instance");
  solve_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--trace", trace_path, "Trace CSV output");
  solve_cmd->add_option("--solution", solution_path, "Solution output, one value per line");

  int atom_index = 0;
  std::string project_backend = "auto";
  double delta = 1e-10;
  auto* project_cmd = app.add_subcommand("project", "Project a onto one function's cone");
  project_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  project_cmd->add_option("--atom", atom_index, "Function index")->capture_default_str();
  project_cmd->add_option("--backend", project_backend, "Projection method")
      ->check(CLI::IsMember({"auto", "exact", "mnp", "fw"}))
      ->capture_default_str();
  project_cmd->add_option("--delta", delta, "MNP/FW tolerance")->capture_default_str();

  std::string hypergraph_path;
  double alpha = 0.0;
  int source = -1;
  std::string p0_path;
  bool sweep = false;
  std::string output_path;
  SolverFlags pr_flags;
  pr_flags.tol = 1e-12;
  auto* pagerank_cmd = app.add_subcommand("pagerank", "Personalized PageRank on a hypergraph");
  pagerank_cmd->add_option("--hypergraph", hypergraph_path, "Hypergraph JSON")->required();
  pagerank_cmd->add_option("--alpha", alpha, "Teleport probability in (0, 1)")->required();
  auto* source_opt = pagerank_cmd->add_option("--source", source, "Seed vertex");
  auto* p0_opt = pagerank_cmd->add_option("--p0", p0_path, "Initial mass file");
  source_opt->excludes(p0_opt);
  pagerank_cmd->add_flag("--sweep", sweep, "Also report the sweep cut");
  pagerank_cmd->add_option("--output", output_path, "Write p here instead of stdout");
  pr_flags.attach(pagerank_cmd, false);

  SslFlags ssl;
  SolverFlags ssl_flags;
  ssl_flags.backend = "exact";
  ssl_flags.max_iters = 50'000'000;
  auto* ssl_cmd = app.add_subcommand("ssl-demo", "Semi-supervised learning with Cheeger cuts");
  ssl_cmd->add_option("--preset", ssl.preset, "Data source")
      ->check(CLI::IsMember({"synthetic", "file"}))
      ->capture_default_str();
  ssl_cmd->add_option("--hypergraph", ssl.hypergraph, "Hypergraph JSON with truth");
  ssl_cmd->add_option("--labels", ssl.labels, "Labeled vertices per class")->capture_default_str();
  ssl_cmd->add_option("--beta", ssl.beta, "Fidelity weight")->capture_default_str();
  ssl_cmd->add_option("--seeds", ssl.seeds, "Number of replicas")->capture_default_str();
  ssl_cmd->add_option("--denominator", ssl.denominator, "Cheeger denominator")
      ->check(CLI::IsMember({"min", "max"}))
      ->capture_default_str();
  ssl_flags.attach(ssl_cmd);

  std::string preset;
  std::uint64_t gen_seed = 0;
  double theta = 1.0;
  int gen_labels = 3;
  std::string gen_output;
  auto* gen_cmd = app.add_subcommand("gen", "Emit a synthetic instance");
  gen_cmd->add_option("--preset", preset,
                      "sec44 (alias cardinality): cardinality benchmark, "
                      "sec62 (alias clusters): two-cluster hypergraph")
      ->required()
      ->transform(CLI::CheckedTransformer(std::map<std::string, std::string>{{"sec44", "sec44"},
                                                                   {"cardinality", "sec44"},
                                                                   {"sec62", "sec62"},
                                                                   {"clusters", "sec62"}}));
  gen_cmd->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--theta", theta, "Cardinality exponent (sec44)")->capture_default_str();
  gen_cmd->add_option("--labels", gen_labels, "Labels per cluster (sec62)")->capture_default_str();
  gen_cmd->add_option("--output", gen_output, "Output path (default stdout)");

  std::string bench_instance;
  double bench_theta = 1.0;
  std::string methods = "rcd,ap";
  std::string backends = "exact,mnp,fw";
  std::string out_dir = "bench";
  SolverFlags bench_flags;
  bench_flags.max_iters = 30'000;
  auto* bench_cmd = app.add_subcommand("bench", "Method/backend grid, one trace per cell");
  bench_cmd->add_option("--instance", bench_instance,
                        "Instance JSON (default: generated cardinality benchmark)");
  bench_cmd->add_option("--theta", bench_theta, "Exponent for the generated instance")
      ->capture_default_str();
  bench_cmd->add_option("--methods", methods, "Comma-separated methods")->capture_default_str();
  bench_cmd->add_option("--backends", backends, "Comma-separated backends")->capture_default_str();
  bench_cmd->add_option("--out-dir", out_dir, "Trace directory")->capture_default_str();
  bench_flags.attach(bench_cmd, false);

  std::vector<const char*> argv{"qdsfm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve_cmd) return cmd_solve(instance_path, solve_flags, trace_path, solution_path, out);
    if (*project_cmd) return cmd_project(instance_path, atom_index, project_backend, delta, out);
    if (*pagerank_cmd) {
      if (source < 0 && p0_path.empty()) {
        err << "pagerank: one of --source or --p0 is required\n";
        return kExitUsage;
      }
      return cmd_pagerank(hypergraph_path, alpha, source, p0_path, sweep, pr_flags, output_path,
                          out);
    }
    if (*ssl_cmd) return cmd_ssl(ssl, ssl_flags, out);
    if (*gen_cmd) return cmd_gen(preset, gen_seed, theta, gen_labels, gen_output, out);
    if (*bench_cmd) {
      return cmd_bench(bench_instance, bench_theta, methods, backends, bench_flags, out_dir, out);
    }
  } catch (const std::logic_error& e) {
    // invalid_argument, domain_error, length_error: bad data or parameters.
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace qdsfm
