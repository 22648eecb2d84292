// Command-line front end: batch benchmarks, single runs, Pareto exports and
// the built-in property checks.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nvrcg/bench.hpp"
#include "nvrcg/selftest.hpp"

namespace {

using namespace nvrcg;

int cmd_bench(const std::string& config_path, const std::string& out_dir,
              const std::string& format, int threads) {
  ExperimentConfig config = ExperimentConfig::load(config_path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (threads > 0) config.threads = threads;
  const ExperimentResult result = run_experiment(config);
  write_experiment_outputs(config, result);
  std::cout << emit_table(result.rows, parse_table_format(format));
  return 0;
}

int cmd_pareto(const std::string& config_path, const std::string& out_dir, int threads) {
  ExperimentConfig config = ExperimentConfig::load(config_path);
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (threads > 0) config.threads = threads;
  const ExperimentResult result = run_experiment(config);
  write_experiment_outputs(config, result);
  for (const auto& p : export_pareto_cloud(config, result)) std::cout << p.string() << '\n';
  return 0;
}

struct RunArgs {
  std::string problem = "table1:A1";
  std::string cone = "";
  std::string beta = "DY";
  WolfeParams wolfe{.strong = false};
  std::uint64_t seed = 0;
  int run_index = 0;
  int max_iter = 10000;
  std::string assert_level = "off";
  std::string cross_reading = "current";
  bool allow_raw = false;
  std::string trace;
};

int cmd_run(const RunArgs& a) {
  const ProblemSpec spec = ProblemSpec::from_string(a.problem);
  const auto obj = spec.build();
  const ConeSpec cone = a.cone.empty()
                            ? ConeSpec::multiobjective(obj->num_objectives())
                            : ConeSpec::from_json(a.cone.front() == '{'
                                                      ? nlohmann::json::parse(a.cone)
                                                      : nlohmann::json(a.cone));
  SolverOptions opts;
  opts.kind = parse_beta_kind(a.beta);
  opts.wolfe = a.wolfe;
  opts.max_iter = a.max_iter;
  opts.allow_raw_beta = a.allow_raw;
  opts.trace_points = !a.trace.empty();
  opts.assert_level = a.assert_level == "full"      ? AssertLevel::kFull
                      : a.assert_level == "descent" ? AssertLevel::kDescent
                                                    : AssertLevel::kOff;
  opts.cross_reading = a.cross_reading == "previous" ? CrossTermReading::kAtPrevious
                                                     : CrossTermReading::kAtCurrent;
  const ManifoldPoint x0 = initial_point(obj->manifold(), a.seed, a.run_index);
  const RunReport r = nvrcg_run(cone, *obj, x0, opts);

  fmt::print("variant: {}\ntermination: {}\niterations: {}\nrestarts: {}\n", to_string(opts.kind),
             to_string(r.termination), r.iterations, r.restarts);
  fmt::print("x0: [{:.10g}]\n", fmt::join(x0.coords.begin(), x0.coords.end(), ", "));
  fmt::print("final_F: [{:.10g}]\nfinal_norm_v: {:.3e}\n",
             fmt::join(r.final_F.begin(), r.final_F.end(), ", "), r.final_norm_v);

  if (!a.trace.empty()) {
    std::ofstream out(a.trace, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file " + a.trace);
    out << "k,norm_v,norm_d,theta,psi_v0,psi_d0,beta,restarted,t,psi_d_at_t,ls_evals,ls_status";
    for (Eigen::Index i = 0; i < x0.coords.size(); ++i) out << ",x" << i + 1;
    out << '\n';
    for (const auto& it : r.trajectory) {
      out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{:.17g},{:.17g},{},{}",
                         it.k, it.norm_v, it.norm_d, it.theta, it.psi_v0, it.psi_d0, it.beta,
                         it.restarted ? 1 : 0, it.t, it.psi_d_at_t, it.line_search_evals,
                         to_string(it.line_search_status));
      for (double c : it.x) out << fmt::format(",{:.17g}", c);
      out << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear conjugate gradient methods for vector optimization on manifolds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format = "markdown";
  int threads = 0;
  auto* bench = app.add_subcommand("bench", "Run a batch experiment from a JSON config");
  bench->add_option("--config", config_path, "Experiment config (JSON)")->required();
  bench->add_option("--out", out_dir, "Override output_dir from the config");
  bench->add_option("--format", format, "Table format printed to stdout")
      ->check(CLI::IsMember({"csv", "json", "markdown"}))
      ->capture_default_str();
  bench->add_option("--threads", threads, "Worker threads (0 = config / hardware)");

  auto* pareto = app.add_subcommand("pareto", "Export Pareto-stationary value clouds (m = 2)");
  pareto->add_option("--config", config_path, "Experiment config (JSON)")->required();
  pareto->add_option("--out", out_dir, "Output directory");
  pareto->add_option("--threads", threads, "Worker threads (0 = config / hardware)");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Solve one problem from one seeded start");
  run->add_option("--problem", ra.problem,
                  "Problem: inline JSON, JSON file, table1:A1..A3 or table2:<n>[:<seed>]")
      ->capture_default_str();
  run->add_option("--cone", ra.cone, "Cone JSON or preset (default multiobjective:m)");
  run->add_option("--beta", ra.beta, "FR CD DY PRP-FR LS-CD HS-DY SD (PRP LS HS need --raw-beta)")
      ->capture_default_str();
  run->add_option("--c1", ra.wolfe.c1, "Armijo constant")->capture_default_str();
  run->add_option("--c2", ra.wolfe.c2, "Curvature constant")->capture_default_str();
  run->add_option("--t-init", ra.wolfe.t_init, "Initial trial step")->capture_default_str();
  run->add_option("--t-min", ra.wolfe.t_min, "Step stagnation threshold")->capture_default_str();
  run->add_flag("--strong", ra.wolfe.strong, "Use the strong Wolfe curvature condition");
  run->add_option("--seed", ra.seed, "Seed for the initial point")->capture_default_str();
  run->add_option("--run-index", ra.run_index, "Run index within the seed stream")
      ->capture_default_str();
  run->add_option("--max-iter", ra.max_iter, "Iteration cap")->capture_default_str();
  run->add_option("--assert-level", ra.assert_level, "off, descent or full")
      ->check(CLI::IsMember({"off", "descent", "full"}))
      ->capture_default_str();
  run->add_option("--cross-reading", ra.cross_reading,
                  "Where PRP/LS/HS evaluate the transported v_k term")
      ->check(CLI::IsMember({"current", "previous"}))
      ->capture_default_str();
  run->add_flag("--raw-beta", ra.allow_raw, "Allow unclamped PRP, LS and HS");
  run->add_option("--trace,--trace-points", ra.trace, "Write the per-iteration trajectory to this CSV");

  std::uint64_t selftest_seed = 2024;
  auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");
  selftest->add_option("--seed", selftest_seed, "Seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) return cmd_bench(config_path, out_dir, format, threads);
    if (*pareto) return cmd_pareto(config_path, out_dir, threads);
    if (*run) return cmd_run(ra);
    if (*selftest) return run_selftest(std::cout, selftest_seed) ? 0 : 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
