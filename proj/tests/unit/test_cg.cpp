#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "nvrcg/bench.hpp"
#include "nvrcg/cg.hpp"
#include "nvrcg/random.hpp"

using namespace nvrcg;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

SearchState state_with(double psi_v0, double prev_psi_v0, double prev_psi_d0,
                       double prev_psi_d_at_t) {
  SearchState s;
  s.k = 1;
  s.psi_v0 = psi_v0;
  PreviousStep p;
  p.psi_v0 = prev_psi_v0;
  p.psi_d0 = prev_psi_d0;
  p.psi_d_at_t = prev_psi_d_at_t;
  s.prev = p;
  return s;
}

SolverOptions options(BetaKind kind, double c1 = 0.1, double c2 = 0.6) {
  SolverOptions o;
  o.kind = kind;
  o.wolfe.c1 = c1;
  o.wolfe.c2 = c2;
  o.wolfe.strong = true;
  o.assert_level = AssertLevel::kFull;
  return o;
}

}  // namespace

TEST_CASE("beta names") {
  CHECK(to_string(BetaKind::kHybridHsDy) == "HS-DY");
  CHECK(to_string(BetaKind::kZero) == "SD");
  CHECK(parse_beta_kind("dy") == BetaKind::kDY);
  CHECK(parse_beta_kind("ZERO") == BetaKind::kZero);
  CHECK(parse_beta_kind("hybrid_prp_fr") == BetaKind::kHybridPrpFr);
  CHECK(parse_beta_kind("LS-CD") == BetaKind::kHybridLsCd);
  CHECK_THROWS_AS(parse_beta_kind("BFGS"), std::invalid_argument);
  CHECK(is_raw_beta(BetaKind::kHS));
  CHECK_FALSE(is_raw_beta(BetaKind::kHybridHsDy));
  CHECK(needs_cross_term(BetaKind::kHybridPrpFr));
  CHECK_FALSE(needs_cross_term(BetaKind::kCD));
}

TEST_CASE("compute_beta examples") {
  CHECK(*compute_beta(BetaKind::kFR, state_with(-0.7, -0.7, -1.0, -0.2)) == 1.0);

  // psi_prev(t d) = 0: beta_DY = psi_v0 / psi_prev_d0 > 0.
  const auto dy = compute_beta(BetaKind::kDY, state_with(-0.5, -1.0, -2.0, 0.0));
  CHECK(*dy == doctest::Approx(0.25));
  CHECK(*compute_beta(BetaKind::kCD, state_with(-0.5, -1.0, -2.0, 0.0)) == doctest::Approx(0.25));

  SearchState s = state_with(-0.5, -1.0, -1.0, 0.1);
  s.psi_cross = -0.8;  // beta_PRP = (0.5 - 0.8) / 1 = -0.3, beta_FR = 0.5
  CHECK(*compute_beta(BetaKind::kPRP, s) == doctest::Approx(-0.3));
  CHECK(*compute_beta(BetaKind::kFR, s) == doctest::Approx(0.5));
  CHECK(*compute_beta(BetaKind::kHybridPrpFr, s) == 0.0);

  s.psi_cross = -0.1;  // PRP = 0.4 < FR = 0.5
  CHECK(*compute_beta(BetaKind::kHybridPrpFr, s) == doctest::Approx(0.4));
  s.psi_cross = 0.5;  // PRP = 1.0 > FR
  CHECK(*compute_beta(BetaKind::kHybridPrpFr, s) == doctest::Approx(0.5));

  // LS and HS share the numerator with PRP.
  s = state_with(-0.5, -1.0, -2.0, -0.5);
  s.psi_cross = -0.1;
  CHECK(*compute_beta(BetaKind::kLS, s) == doctest::Approx(0.2));
  CHECK(*compute_beta(BetaKind::kHS, s) == doctest::Approx(0.4 / 1.5));
  CHECK(*compute_beta(BetaKind::kHybridLsCd, s) == doctest::Approx(0.2));
  CHECK(*compute_beta(BetaKind::kHybridHsDy, s) == doctest::Approx(0.4 / 1.5));

  CHECK(*compute_beta(BetaKind::kZero, SearchState{}) == 0.0);
}

TEST_CASE("compute_beta degeneracy and errors") {
  CHECK_FALSE(compute_beta(BetaKind::kFR, state_with(-0.5, 0.0, -1.0, 0.0)).has_value());
  CHECK_FALSE(compute_beta(BetaKind::kDY, state_with(-0.5, -1.0, -1.0, -1.0)).has_value());
  CHECK_FALSE(compute_beta(BetaKind::kCD, state_with(-0.5, -1.0, 1e-15, 0.0)).has_value());
  CHECK_THROWS_AS(compute_beta(BetaKind::kFR, SearchState{}), std::invalid_argument);
  CHECK_THROWS_AS(compute_beta(BetaKind::kPRP, state_with(-0.5, -1.0, -1.0, 0.0)),
                  std::invalid_argument);
}

TEST_CASE("descent_interval_check examples") {
  CHECK(descent_interval_check(state_with(-1.0, -1.0, -1.0, 2.0), 0.0));
  CHECK(descent_interval_check(state_with(-1.0, -1.0, -1.0, -1.0), 100.0));
  CHECK_FALSE(descent_interval_check(state_with(-1.0, -1.0, -1.0, 2.0), 0.5));
  CHECK(descent_interval_check(state_with(-1.0, -1.0, -1.0, 2.0), 0.49));
  CHECK_FALSE(descent_interval_check(state_with(-1.0, -1.0, -1.0, -1.0), -0.1));
  CHECK_THROWS_AS(descent_interval_check(SearchState{}, 0.0), std::invalid_argument);
}

TEST_CASE("zoutendijk_monitor") {
  RunReport r;
  CHECK_THROWS_AS(zoutendijk_monitor(r), std::invalid_argument);
  IterationSummary a;
  a.psi_d0 = -2.0;
  a.norm_d = 4.0;
  r.trajectory.push_back(a);
  CHECK(zoutendijk_monitor(r) == std::vector<double>{0.25});
  IterationSummary b;
  b.psi_d0 = -1.0;
  b.norm_d = 1.0;
  r.trajectory.push_back(b);
  CHECK(zoutendijk_monitor(r) == std::vector<double>{0.25, 1.25});
}

TEST_CASE("critical start stops at iteration 0") {
  const auto a1 = make_objective(QuadLinearProblem::benchmark(1), Manifold::sphere(2));
  const ManifoldPoint x0 = a1->manifold().point(vec({0.6, 0.8}));
  const RunReport r = nvrcg_run(ConeSpec::multiobjective(2), *a1, x0, options(BetaKind::kDY));
  CHECK(r.iterations == 0);
  CHECK(r.termination == Termination::kCritical);
  CHECK(r.trajectory.empty());
  CHECK(r.final_x == x0.coords);
}

TEST_CASE("run argument errors") {
  const auto a3 = make_objective(QuadLinearProblem::benchmark(3), Manifold::sphere(2));
  const ConeSpec cone = ConeSpec::multiobjective(2);
  const ManifoldPoint x0 = a3->manifold().point(vec({0.6, 0.8}));
  CHECK_THROWS_AS(nvrcg_run(cone, *a3, x0, options(BetaKind::kPRP)), std::invalid_argument);
  SolverOptions o = options(BetaKind::kDY);
  o.max_iter = 0;
  CHECK_THROWS_AS(nvrcg_run(cone, *a3, x0, o), std::invalid_argument);
  o = options(BetaKind::kDY, 0.7, 0.6);
  CHECK_THROWS_AS(nvrcg_run(cone, *a3, x0, o), std::invalid_argument);
  const ManifoldPoint off{vec({1.0, 1.0}), a3->manifold().id()};
  CHECK_THROWS_AS(nvrcg_run(cone, *a3, off, options(BetaKind::kDY)), std::invalid_argument);
  o = options(BetaKind::kPRP);
  o.allow_raw_beta = true;
  o.assert_level = AssertLevel::kDescent;
  CHECK_NOTHROW(nvrcg_run(cone, *a3, x0, o));
}

TEST_CASE("max_iter is a termination, not an error") {
  const auto obj = ProblemSpec::from_string("table2:20").build();
  const ManifoldPoint x0 = initial_point(obj->manifold(), 1, 0);
  SolverOptions o = options(BetaKind::kZero, 0.001, 0.6);
  o.max_iter = 2;
  const RunReport r = nvrcg_run(ConeSpec::multiobjective(2), *obj, x0, o);
  CHECK(r.termination == Termination::kMaxIter);
  CHECK(r.iterations == 2);
}

TEST_CASE("steepest descent variant never uses the previous direction") {
  const auto obj = ProblemSpec::from_string("table2:5").build();
  SolverOptions o = options(BetaKind::kZero, 0.001, 0.6);
  o.trace_points = true;
  const RunReport r = nvrcg_run(ConeSpec::multiobjective(2), *obj, initial_point(obj->manifold(), 3, 1), o);
  CHECK(r.restarts == 0);
  for (const auto& it : r.trajectory) {
    CHECK(it.beta == 0.0);
    CHECK(it.d == it.v);
    CHECK(it.psi_d0 == it.psi_v0);
  }
}

TEST_CASE("cross-term readings both run") {
  const auto obj = ProblemSpec::from_string("table2:5").build();
  const ConeSpec cone = ConeSpec::multiobjective(2);
  for (CrossTermReading reading : {CrossTermReading::kAtCurrent, CrossTermReading::kAtPrevious}) {
    for (BetaKind kind : {BetaKind::kHybridPrpFr, BetaKind::kHybridLsCd, BetaKind::kHybridHsDy}) {
      SolverOptions o = options(kind, 0.001, 0.6);
      o.cross_reading = reading;
      const RunReport r = nvrcg_run(cone, *obj, initial_point(obj->manifold(), 5, 0), o);
      CHECK(r.termination == Termination::kCritical);
    }
  }
}

TEST_CASE("property: run invariants across variants and problems") {
  const ConeSpec cone = ConeSpec::multiobjective(2);
  const std::vector<std::string> problems = {"table1:A2", "table1:A3", "table2:5", "table2:10"};
  const std::vector<BetaKind> kinds = {BetaKind::kFR,         BetaKind::kCD,
                                       BetaKind::kDY,         BetaKind::kHybridPrpFr,
                                       BetaKind::kHybridLsCd, BetaKind::kHybridHsDy,
                                       BetaKind::kZero};
  for (const auto& name : problems) {
    const auto obj = ProblemSpec::from_string(name).build();
    const double c1 = name.rfind("table1", 0) == 0 ? 0.1 : 0.001;
    for (BetaKind kind : kinds) {
      for (int run = 0; run < 5; ++run) {
        const ManifoldPoint x0 = initial_point(obj->manifold(), 77, run);
        const RunReport r = nvrcg_run(cone, *obj, x0, options(kind, c1, 0.6));
        if (r.termination == Termination::kCritical) CHECK(r.final_norm_v <= kCriticalityTol);
        CHECK(r.min_norm_v <= r.final_norm_v);
        Vector prev_F = obj->eval(x0);
        for (std::size_t k = 0; k < r.trajectory.size(); ++k) {
          const auto& it = r.trajectory[k];
          CHECK(it.psi_d0 < 0.0);
          CHECK(it.psi_v0 < -0.5 * it.norm_v * it.norm_v + 1e-10);
          if (k > 0) {
            // F(x_k) <=_K F(x_{k-1}) componentwise.
            CHECK(leq_k(cone, it.F_x, prev_F));
          }
          prev_F = it.F_x;
        }
        if (!r.zoutendijk_partial_sums.empty()) {
          for (std::size_t k = 1; k < r.zoutendijk_partial_sums.size(); ++k) {
            CHECK(r.zoutendijk_partial_sums[k] >= r.zoutendijk_partial_sums[k - 1]);
          }
        }
      }
    }
  }
}

TEST_CASE("assertion violations carry a state dump") {
  AssertionViolation v("bad", "k=3 psi=1");
  CHECK(std::string(v.what()).find("k=3") != std::string::npos);
  CHECK(v.dump == "k=3 psi=1");
}
