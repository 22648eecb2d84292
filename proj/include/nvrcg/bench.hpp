#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nvrcg/cg.hpp"

namespace nvrcg {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// One batch of solver runs: `runs` seeded initial points, each solved with
/// every variant from the same x0.
struct ExperimentConfig {
  ProblemSpec problem;
  nlohmann::json cone = "multiobjective:2";
  std::vector<BetaKind> variants;
  WolfeParams wolfe;
  int runs = 100;
  std::uint64_t seed = 0;
  int max_iter = 10000;
  std::filesystem::path output_dir = "out";
  AssertLevel assert_level = AssertLevel::kOff;
  CrossTermReading cross_reading = CrossTermReading::kAtCurrent;
  bool allow_raw_beta = false;
  bool trace_points = false;
  int threads = 0;  ///< 0 = hardware concurrency

  /// Keys: problem, cone, variants, wolfe{c1,c2,t_init,t_min,strong,
  /// max_expansions,max_zoom}, runs, seed, max_iter, output_dir, assert_level
  /// ("off"|"descent"|"full"), cross_reading ("current"|"previous"),
  /// allow_raw_beta, trace_points, threads. Missing keys take the defaults
  /// above; problem and variants are required.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
  /// FNV-1a 64 of the canonical JSON (excluding output_dir and threads).
  std::uint64_t hash() const;

  /// Circle problem with c1 = 0.1, c2 = 0.6, strong Wolfe; variants FR, CD, DY, SD.
  static ExperimentConfig table1(int matrix_index, int runs = 100, std::uint64_t seed = 1);
  /// Two random quadratics on S^{n-1} with c1 = 0.001, c2 = 0.6, strong
  /// Wolfe; variants FR, CD, DY, PRP-FR, LS-CD, HS-DY, SD.
  static ExperimentConfig table2(int n, int runs = 100, std::uint64_t seed = 1,
                                 std::uint64_t problem_seed = 42);
};

struct AggregateRow {
  BetaKind variant = BetaKind::kZero;
  double mean_iterations = 0.0;
  int success_count = 0;
  int stagnation_count = 0;
  double mean_final_norm_v = 0.0;

  friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

struct RunRecord {
  BetaKind variant = BetaKind::kZero;
  int run = 0;
  Vector x0;
  RunReport report;
};

struct ExperimentResult {
  std::vector<AggregateRow> rows;  ///< in config.variants order
  std::vector<RunRecord> runs;     ///< ordered by (variant, run)
};

/// Initial point of run `run`: normalized Gaussian (sphere) or Gaussian.
ManifoldPoint initial_point(const Manifold& mf, std::uint64_t seed, int run);

ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<AggregateRow> aggregate(const std::vector<BetaKind>& variants,
                                    const std::vector<RunRecord>& runs);

/// Writes aggregate.csv and runs.csv into config.output_dir.
void write_experiment_outputs(const ExperimentConfig& config, const ExperimentResult& result);

/// Writes values_<variant>.csv (f1,f2 of critical final points) for every
/// variant plus front_curve.csv (F sampled around the circle; header only
/// unless the manifold is S^1). Requires m = 2.
std::vector<std::filesystem::path> export_pareto_cloud(const ExperimentConfig& config,
                                                       const ExperimentResult& result);
std::vector<std::filesystem::path> export_pareto_cloud(const ExperimentConfig& config);

enum class TableFormat { kCsv, kJson, kMarkdown };
TableFormat parse_table_format(std::string_view name);

/// Columns: variant, mean_iterations (2 decimals), success_count,
/// stagnation_count, mean_final_norm_v (3 significant digits). JSON keeps
/// full precision so it parses back to identical rows.
std::string emit_table(const std::vector<AggregateRow>& rows, TableFormat format);
std::vector<AggregateRow> parse_table_json(const std::string& text);

/// "# key: value" lines carried at the top of every CSV file.
std::string csv_header_comments(const ExperimentConfig& config);

}  // namespace nvrcg
