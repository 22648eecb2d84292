#include "nvrcg/bench.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "nvrcg/random.hpp"

namespace nvrcg {
namespace {

std::string_view to_string(AssertLevel a) {
  switch (a) {
    case AssertLevel::kOff: return "off";
    case AssertLevel::kDescent: return "descent";
    case AssertLevel::kFull: return "full";
  }
  return "off";
}

AssertLevel parse_assert_level(const std::string& s) {
  if (s == "off") return AssertLevel::kOff;
  if (s == "descent") return AssertLevel::kDescent;
  if (s == "full") return AssertLevel::kFull;
  throw std::invalid_argument("assert_level must be off, descent or full");
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw std::runtime_error(fmt::format("cannot create output directory '{}'", dir.string()));
  }
}

std::string fmt_double(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.contains("problem")) throw std::invalid_argument("config needs 'problem'");
  if (!j.contains("variants")) throw std::invalid_argument("config needs 'variants'");
  ExperimentConfig c;
  c.problem = ProblemSpec::parse(j.at("problem"));
  if (j.contains("manifold")) {
    c.problem.json["manifold"] = j.at("manifold");
    c.problem = ProblemSpec::parse(c.problem.json);
  }
  c.cone = j.value("cone", c.cone);
  ConeSpec::from_json(c.cone);
  for (const auto& v : j.at("variants")) c.variants.push_back(parse_beta_kind(v.get<std::string>()));
  if (c.variants.empty()) throw std::invalid_argument("config lists no variants");
  if (j.contains("wolfe")) {
    const auto& w = j.at("wolfe");
    c.wolfe.c1 = w.value("c1", c.wolfe.c1);
    c.wolfe.c2 = w.value("c2", c.wolfe.c2);
    c.wolfe.t_init = w.value("t_init", c.wolfe.t_init);
    c.wolfe.t_min = w.value("t_min", c.wolfe.t_min);
    c.wolfe.strong = w.value("strong", c.wolfe.strong);
    c.wolfe.max_expansions = w.value("max_expansions", c.wolfe.max_expansions);
    c.wolfe.max_zoom = w.value("max_zoom", c.wolfe.max_zoom);
  }
  c.wolfe.validate();
  c.runs = j.value("runs", c.runs);
  c.seed = j.value("seed", c.seed);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.output_dir = j.value("output_dir", c.output_dir.string());
  c.assert_level = parse_assert_level(j.value("assert_level", std::string("off")));
  const auto reading = j.value("cross_reading", std::string("current"));
  if (reading == "current") {
    c.cross_reading = CrossTermReading::kAtCurrent;
  } else if (reading == "previous") {
    c.cross_reading = CrossTermReading::kAtPrevious;
  } else {
    throw std::invalid_argument("cross_reading must be current or previous");
  }
  c.allow_raw_beta = j.value("allow_raw_beta", c.allow_raw_beta);
  c.trace_points = j.value("trace_points", c.trace_points);
  c.threads = j.value("threads", c.threads);
  if (c.runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (c.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(fmt::format("cannot read config '{}'", path.string()));
  return from_json(nlohmann::json::parse(in));
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json variants_json = nlohmann::json::array();
  for (auto v : variants) variants_json.push_back(std::string(to_string(v)));
  return {
      {"problem", problem.json},
      {"cone", cone},
      {"variants", variants_json},
      {"wolfe",
       {{"c1", wolfe.c1},
        {"c2", wolfe.c2},
        {"t_init", wolfe.t_init},
        {"t_min", wolfe.t_min},
        {"strong", wolfe.strong},
        {"max_expansions", wolfe.max_expansions},
        {"max_zoom", wolfe.max_zoom}}},
      {"runs", runs},
      {"seed", seed},
      {"max_iter", max_iter},
      {"output_dir", output_dir.string()},
      {"assert_level", std::string(to_string(assert_level))},
      {"cross_reading", cross_reading == CrossTermReading::kAtCurrent ? "current" : "previous"},
      {"allow_raw_beta", allow_raw_beta},
      {"trace_points", trace_points},
      {"threads", threads},
  };
}

std::uint64_t ExperimentConfig::hash() const {
  auto j = to_json();
  j.erase("output_dir");
  j.erase("threads");
  return fnv1a(j.dump());
}

ExperimentConfig ExperimentConfig::table1(int matrix_index, int runs, std::uint64_t seed) {
  ExperimentConfig c;
  c.problem = ProblemSpec::parse(
      {{"family", "quad_linear"}, {"preset", fmt::format("A{}", matrix_index)}});
  c.variants = {BetaKind::kFR, BetaKind::kCD, BetaKind::kDY, BetaKind::kZero};
  c.wolfe.c1 = 0.1;
  c.wolfe.c2 = 0.6;
  c.wolfe.strong = true;
  c.runs = runs;
  c.seed = seed;
  return c;
}

ExperimentConfig ExperimentConfig::table2(int n, int runs, std::uint64_t seed,
                                          std::uint64_t problem_seed) {
  ExperimentConfig c;
  c.problem = ProblemSpec::parse({{"family", "quad_quad"}, {"n", n}, {"m", 2}, {"seed", problem_seed}});
  c.variants = {BetaKind::kFR,         BetaKind::kCD,         BetaKind::kDY,
                BetaKind::kHybridPrpFr, BetaKind::kHybridLsCd, BetaKind::kHybridHsDy,
                BetaKind::kZero};
  c.wolfe.c1 = 0.001;
  c.wolfe.c2 = 0.6;
  c.wolfe.strong = true;
  c.runs = runs;
  c.seed = seed;
  return c;
}

ManifoldPoint initial_point(const Manifold& mf, std::uint64_t seed, int run) {
  Rng rng = Rng(seed).split(static_cast<std::uint64_t>(run));
  if (mf.kind() == ManifoldKind::kSphere) {
    return mf.point(random_unit_vector(rng, mf.ambient_dim()), Validation::kProject);
  }
  return mf.point(rng.normal_vector(mf.ambient_dim()));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const auto obj = config.problem.build();
  const ConeSpec cone = ConeSpec::from_json(config.cone);
  if (cone.dim() != obj->num_objectives()) {
    throw std::invalid_argument("cone dimension does not match the number of objectives");
  }
  const Manifold& mf = obj->manifold();

  std::vector<ManifoldPoint> starts;
  starts.reserve(config.runs);
  for (int r = 0; r < config.runs; ++r) starts.push_back(initial_point(mf, config.seed, r));

  const std::size_t total = config.variants.size() * static_cast<std::size_t>(config.runs);
  std::vector<RunRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const auto vi = i / static_cast<std::size_t>(config.runs);
      const int run = static_cast<int>(i % static_cast<std::size_t>(config.runs));
      SolverOptions opts;
      opts.kind = config.variants[vi];
      opts.wolfe = config.wolfe;
      opts.max_iter = config.max_iter;
      opts.assert_level = config.assert_level;
      opts.cross_reading = config.cross_reading;
      opts.allow_raw_beta = config.allow_raw_beta;
      opts.trace_points = config.trace_points;
      try {
        records[i] = {opts.kind, run, starts[run].coords, nvrcg_run(cone, *obj, starts[run], opts)};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(total, 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.rows = aggregate(config.variants, records);
  result.runs = std::move(records);
  return result;
}

std::vector<AggregateRow> aggregate(const std::vector<BetaKind>& variants,
                                    const std::vector<RunRecord>& runs) {
  std::vector<AggregateRow> rows;
  for (BetaKind v : variants) {
    AggregateRow row;
    row.variant = v;
    int count = 0;
    double iters = 0.0;
    double norms = 0.0;
    for (const auto& r : runs) {
      if (r.variant != v) continue;
      ++count;
      iters += r.report.iterations;
      norms += r.report.final_norm_v;
      if (r.report.termination == Termination::kCritical) ++row.success_count;
      if (r.report.termination == Termination::kStepStagnated) ++row.stagnation_count;
    }
    if (count > 0) {
      row.mean_iterations = iters / count;
      row.mean_final_norm_v = norms / count;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string csv_header_comments(const ExperimentConfig& config) {
  return fmt::format("# tool: nvrcg {}\n# seed: {}\n# rng: {}\n# config_hash: {:016x}\n",
                     kToolVersion, config.seed, Rng::kName, config.hash());
}

void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result) {
  ensure_dir(config.output_dir);
  {
    auto out = open_output(config.output_dir / "aggregate.csv");
    out << csv_header_comments(config) << emit_table(result.rows, TableFormat::kCsv);
  }
  auto out = open_output(config.output_dir / "runs.csv");
  out << csv_header_comments(config);
  const auto m = result.runs.empty() ? 0 : result.runs.front().report.final_F.size();
  out << "variant,run,iterations,termination,restarts,final_norm_v";
  for (Eigen::Index i = 0; i < m; ++i) out << ",f" << (i + 1);
  out << '\n';
  for (const auto& r : result.runs) {
    out << to_string(r.variant) << ',' << r.run << ',' << r.report.iterations << ','
        << to_string(r.report.termination) << ',' << r.report.restarts << ','
        << fmt_double(r.report.final_norm_v);
    for (double f : r.report.final_F) out << ',' << fmt_double(f);
    out << '\n';
  }
}

std::vector<std::filesystem::path> export_pareto_cloud(const ExperimentConfig& config,
                                                       const ExperimentResult& result) {
  const auto obj = config.problem.build();
  if (obj->num_objectives() != 2) {
    throw std::domain_error("Pareto export supports exactly two objectives");
  }
  ensure_dir(config.output_dir);
  std::vector<std::filesystem::path> written;
  const std::string header = csv_header_comments(config);

  for (BetaKind v : config.variants) {
    const auto path = config.output_dir / fmt::format("values_{}.csv", to_string(v));
    auto out = open_output(path);
    out << header << "f1,f2\n";
    for (const auto& r : result.runs) {
      if (r.variant != v || r.report.termination != Termination::kCritical) continue;
      out << fmt_double(r.report.final_F(0)) << ',' << fmt_double(r.report.final_F(1)) << '\n';
    }
    written.push_back(path);
  }

  const auto path = config.output_dir / "front_curve.csv";
  auto out = open_output(path);
  out << header << "theta,f1,f2\n";
  const Manifold& mf = obj->manifold();
  if (mf.kind() == ManifoldKind::kSphere && mf.ambient_dim() == 2) {
    constexpr int kSamples = 1000;
    for (int s = 0; s < kSamples; ++s) {
      const double theta = 2.0 * std::numbers::pi * s / kSamples;
      Vector p(2);
      p << std::cos(theta), std::sin(theta);
      const Vector f = obj->eval(mf.point(p));
      out << fmt_double(theta) << ',' << fmt_double(f(0)) << ',' << fmt_double(f(1)) << '\n';
    }
  }
  written.push_back(path);
  return written;
}

std::vector<std::filesystem::path> export_pareto_cloud(const ExperimentConfig& config) {
  const auto obj = config.problem.build();
  if (obj->num_objectives() != 2) {
    throw std::domain_error("Pareto export supports exactly two objectives");
  }
  return export_pareto_cloud(config, run_experiment(config));
}

TableFormat parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::kCsv;
  if (name == "json") return TableFormat::kJson;
  if (name == "markdown" || name == "md") return TableFormat::kMarkdown;
  throw std::invalid_argument(fmt::format("unknown table format '{}'", name));
}

std::string emit_table(const std::vector<AggregateRow>& rows, TableFormat format) {
  if (rows.empty()) throw std::invalid_argument("emit_table needs at least one row");
  std::ostringstream out;
  switch (format) {
    case TableFormat::kCsv:
      out << "variant,mean_iterations,success_count,stagnation_count,mean_final_norm_v\n";
      for (const auto& r : rows) {
        out << fmt::format("{},{:.2f},{},{},{:.2e}\n", to_string(r.variant), r.mean_iterations,
                           r.success_count, r.stagnation_count, r.mean_final_norm_v);
      }
      break;
    case TableFormat::kMarkdown:
      out << "| variant | mean_iterations | success_count | stagnation_count | mean_final_norm_v |\n"
          << "|---|---:|---:|---:|---:|\n";
      for (const auto& r : rows) {
        out << fmt::format("| {} | {:.2f} | {} | {} | {:.2e} |\n", to_string(r.variant),
                           r.mean_iterations, r.success_count, r.stagnation_count,
                           r.mean_final_norm_v);
      }
      break;
    case TableFormat::kJson: {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : rows) {
        arr.push_back({{"variant", std::string(to_string(r.variant))},
                       {"mean_iterations", r.mean_iterations},
                       {"success_count", r.success_count},
                       {"stagnation_count", r.stagnation_count},
                       {"mean_final_norm_v", r.mean_final_norm_v}});
      }
      out << arr.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::vector<AggregateRow> parse_table_json(const std::string& text) {
  std::vector<AggregateRow> rows;
  for (const auto& j : nlohmann::json::parse(text)) {
    rows.push_back({parse_beta_kind(j.at("variant").get<std::string>()),
                    j.at("mean_iterations").get<double>(), j.at("success_count").get<int>(),
                    j.at("stagnation_count").get<int>(), j.at("mean_final_norm_v").get<double>()});
  }
  return rows;
}

}  // namespace nvrcg
