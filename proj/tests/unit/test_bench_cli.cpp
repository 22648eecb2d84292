#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nvrcg/bench.hpp"

using namespace nvrcg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nvrcg_bench_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_a3(const fs::path& out) {
  ExperimentConfig c = ExperimentConfig::table1(3, 6, 11);
  c.output_dir = out;
  c.assert_level = AssertLevel::kFull;
  return c;
}

}  // namespace

TEST_CASE("emit_table formats") {
  const std::vector<AggregateRow> rows = {{BetaKind::kDY, 6.949999999, 98, 2, 1.23456e-5}};
  const std::string csv = emit_table(rows, TableFormat::kCsv);
  CHECK(csv == "variant,mean_iterations,success_count,stagnation_count,mean_final_norm_v\n"
               "DY,6.95,98,2,1.23e-05\n");
  const std::string md = emit_table(rows, TableFormat::kMarkdown);
  CHECK(md.find("| DY | 6.95 | 98 | 2 | 1.23e-05 |") != std::string::npos);
  CHECK(emit_table({{BetaKind::kZero, 29.47, 100, 0, 0.0}}, TableFormat::kCsv).find("SD,29.47") !=
        std::string::npos);
  CHECK_THROWS_AS(emit_table({}, TableFormat::kCsv), std::invalid_argument);
}

TEST_CASE("json table round trip keeps full precision") {
  const std::vector<AggregateRow> rows = {
      {BetaKind::kFR, 12.1700000001, 100, 0, 3.3e-5},
      {BetaKind::kHybridHsDy, 1.0 / 3.0, 7, 93, 0.1 + 0.2},
  };
  CHECK(parse_table_json(emit_table(rows, TableFormat::kJson)) == rows);
}

TEST_CASE("table formats parse") {
  CHECK(parse_table_format("csv") == TableFormat::kCsv);
  CHECK(parse_table_format("json") == TableFormat::kJson);
  CHECK(parse_table_format("markdown") == TableFormat::kMarkdown);
  CHECK_THROWS_AS(parse_table_format("xlsx"), std::invalid_argument);
}

TEST_CASE("config json round trip and hash") {
  const ExperimentConfig t2 = ExperimentConfig::table2(10, 5, 3);
  const ExperimentConfig back = ExperimentConfig::from_json(t2.to_json());
  CHECK(back.to_json() == t2.to_json());
  CHECK(back.hash() == t2.hash());

  ExperimentConfig moved = t2;
  moved.output_dir = "elsewhere";
  moved.threads = 7;
  CHECK(moved.hash() == t2.hash());
  ExperimentConfig other = t2;
  other.seed = 4;
  CHECK(other.hash() != t2.hash());

  CHECK(t2.wolfe.c1 == 0.001);
  CHECK(t2.variants.size() == 7);
  const ExperimentConfig t1 = ExperimentConfig::table1(1);
  CHECK(t1.wolfe.c1 == 0.1);
  CHECK(t1.wolfe.c2 == 0.6);
  CHECK(t1.runs == 100);
}

TEST_CASE("config errors") {
  using nlohmann::json;
  const json problem = {{"family", "quad_linear"}, {"preset", "A2"}};
  CHECK_THROWS(ExperimentConfig::from_json({{"variants", {"DY"}}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"problem", problem}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"problem", problem}, {"variants", json::array()}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"problem", problem}, {"variants", {"XX"}}}));
  CHECK_THROWS(ExperimentConfig::from_json({{"problem", problem}, {"variants", {"DY"}}, {"runs", 0}}));
  CHECK_THROWS(ExperimentConfig::from_json(
      {{"problem", problem}, {"variants", {"DY"}}, {"wolfe", {{"c1", 0.9}}}}));
  CHECK_THROWS(ExperimentConfig::from_json(
      {{"problem", problem}, {"variants", {"DY"}}, {"assert_level", "loud"}}));
  CHECK_THROWS(ExperimentConfig::from_json(
      {{"problem", problem}, {"variants", {"DY"}}, {"cross_reading", "sideways"}}));
  CHECK_THROWS(ExperimentConfig::load("definitely_missing.json"));

  ExperimentConfig c = ExperimentConfig::table1(2, 2, 1);
  c.cone = "multiobjective:3";
  CHECK_THROWS_AS(run_experiment(c), std::invalid_argument);
}

TEST_CASE("initial points are shared across variants and seeded") {
  const Manifold s = Manifold::sphere(4);
  CHECK(initial_point(s, 5, 2).coords == initial_point(s, 5, 2).coords);
  CHECK(initial_point(s, 5, 2).coords != initial_point(s, 5, 3).coords);
  CHECK(initial_point(s, 5, 2).coords.norm() == doctest::Approx(1.0).epsilon(1e-14));

  const ExperimentResult r = run_experiment(small_a3("unused"));
  for (const auto& rec : r.runs) {
    CHECK(rec.x0 == r.runs[static_cast<std::size_t>(rec.run)].x0);
  }
}

TEST_CASE("aggregate counts add up") {
  const ExperimentConfig c = ExperimentConfig::table2(5, 8, 2);
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.rows.size() == c.variants.size());
  REQUIRE(r.runs.size() == c.variants.size() * 8);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].variant == c.variants[i]);
    CHECK(r.rows[i].success_count + r.rows[i].stagnation_count <= 8);
    CHECK(r.rows[i].mean_iterations >= 0.0);
  }
  CHECK(aggregate(c.variants, r.runs) == r.rows);
}

TEST_CASE("outputs are byte-identical across repeats and thread counts") {
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  ExperimentConfig ca = small_a3(a);
  ca.threads = 1;
  ExperimentConfig cb = small_a3(b);
  cb.threads = 3;
  write_experiment_outputs(ca, run_experiment(ca));
  write_experiment_outputs(cb, run_experiment(cb));
  for (const char* f : {"aggregate.csv", "runs.csv"}) {
    const std::string x = slurp(a / f);
    CHECK_FALSE(x.empty());
    CHECK(x == slurp(b / f));
    CHECK(x.rfind("# tool: nvrcg", 0) == 0);
    CHECK(x.find("# seed: 11\n") != std::string::npos);
    CHECK(x.find("# rng: splitmix64+mt19937_64/v1\n") != std::string::npos);
    CHECK(x.find("# config_hash: ") != std::string::npos);
    CHECK(x.find('\r') == std::string::npos);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("pareto export") {
  const fs::path dir = scratch("pareto");
  ExperimentConfig c = small_a3(dir);
  const auto files = export_pareto_cloud(c);
  CHECK(files.size() == c.variants.size() + 1);
  const std::string curve = slurp(dir / "front_curve.csv");
  std::size_t lines = 0;
  for (char ch : curve) lines += ch == '\n';
  CHECK(lines == 4 + 1 + 1000);
  CHECK(slurp(dir / "values_DY.csv").find("f1,f2\n") != std::string::npos);

  // No runs at all: header-only value files.
  const fs::path empty_dir = scratch("pareto_empty");
  c.output_dir = empty_dir;
  export_pareto_cloud(c, ExperimentResult{});
  const std::string values = slurp(empty_dir / "values_FR.csv");
  CHECK(values.substr(values.size() - 6) == "f1,f2\n");

  // Curve is header-only away from the circle.
  const fs::path hd = scratch("pareto_hd");
  ExperimentConfig t2 = ExperimentConfig::table2(4, 2, 1);
  t2.output_dir = hd;
  export_pareto_cloud(t2);
  const std::string hd_curve = slurp(hd / "front_curve.csv");
  CHECK(hd_curve.substr(hd_curve.size() - 12) == "theta,f1,f2\n");

  ExperimentConfig three = ExperimentConfig::from_json(
      {{"problem", {{"family", "quad_quad"}, {"n", 3}, {"m", 3}, {"seed", 1}}},
       {"cone", "multiobjective:3"},
       {"variants", {"SD"}},
       {"runs", 1}});
  CHECK_THROWS_AS(export_pareto_cloud(three), std::domain_error);

  fs::remove_all(dir);
  fs::remove_all(empty_dir);
  fs::remove_all(hd);
}

TEST_CASE("unwritable output directory") {
  ExperimentConfig c = small_a3("/proc/nvrcg_cannot_write_here");
  CHECK_THROWS_AS(write_experiment_outputs(c, run_experiment(c)), std::runtime_error);
}
