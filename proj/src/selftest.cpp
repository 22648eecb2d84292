#include "nvrcg/selftest.hpp"

#include <cmath>
#include <functional>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "nvrcg/cg.hpp"
#include "nvrcg/random.hpp"

namespace nvrcg {
namespace {

struct Check {
  std::string name;
  std::function<bool(Rng&)> body;
};

bool phi_properties(Rng& rng) {
  for (int m : {1, 2, 5}) {
    const ConeSpec cone = ConeSpec::multiobjective(m);
    for (int trial = 0; trial < 10000; ++trial) {
      const Vector y = rng.normal_vector(m);
      const Vector z = rng.normal_vector(m);
      const double tol = 1e-12 * (1.0 + y.lpNorm<Eigen::Infinity>() + z.lpNorm<Eigen::Infinity>());
      if (phi(cone, y + z) > phi(cone, y) + phi(cone, z) + tol) return false;
      if (std::abs(phi(cone, y) - phi(cone, z)) > (y - z).norm() + tol) return false;
      const Vector up = y + rng.normal_vector(m).cwiseAbs();
      if (!leq_k(cone, y, up) || phi(cone, y) > phi(cone, up) + tol) return false;
    }
  }
  return true;
}

bool geometry(Rng& rng) {
  constexpr double h = 1e-6;
  for (int n : {2, 5, 10}) {
    const Manifold mf = Manifold::sphere(n);
    for (int trial = 0; trial < 20; ++trial) {
      const ManifoldPoint x = mf.point(random_unit_vector(rng, n));
      const TangentVector d = mf.tangent(x, rng.normal_vector(n));
      const TangentVector u = mf.tangent(x, rng.normal_vector(n));
      const Vector fd0 =
          (mf.retract(x, h * u).coords - mf.retract(x, -h * u).coords) / (2.0 * h);
      if ((fd0 - u.components).lpNorm<Eigen::Infinity>() > 1e-6) return false;
      const Vector fd = (mf.retract(x, d + h * u).coords - mf.retract(x, d + (-h) * u).coords) /
                        (2.0 * h);
      const TangentVector moved = mf.transport_diff_retraction(x, d, u);
      if ((fd - moved.components).lpNorm<Eigen::Infinity>() > 1e-6) return false;
    }
  }
  return true;
}

bool gradients(Rng& rng) {
  constexpr double h = 1e-6;
  const auto obj = make_objective(QuadQuadProblem::random(6, 2, rng.next_u64()), Manifold::sphere(6));
  const Manifold& mf = obj->manifold();
  for (int trial = 0; trial < 20; ++trial) {
    const ManifoldPoint x = mf.point(random_unit_vector(rng, 6));
    const TangentVector d = mf.tangent(x, rng.normal_vector(6));
    const Vector fd = (obj->eval(mf.retract(x, h * d)) - obj->eval(mf.retract(x, -h * d))) / (2 * h);
    if ((fd - obj->jacobian_action(x, d)).lpNorm<Eigen::Infinity>() > 1e-5) return false;
  }
  return true;
}

bool subproblem_oracle(Rng& rng) {
  constexpr int kRes = 500;
  const ConeSpec cone = ConeSpec::multiobjective(2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    const auto obj = make_objective(QuadQuadProblem::random(n, 2, rng.next_u64()), Manifold::sphere(n));
    const ManifoldPoint x = obj->manifold().point(random_unit_vector(rng, n));
    const auto sd = steepest_direction(cone, *obj, x);
    const auto bf = brute_force_direction(cone, *obj, x, kRes);
    if (sd.theta > bf.value + 2.0 / kRes) return false;
  }
  return true;
}

bool line_search_acceptance(Rng& rng) {
  const ConeSpec cone = ConeSpec::multiobjective(2);
  WolfeParams wp;
  for (int trial = 0; trial < 20; ++trial) {
    const auto obj = make_objective(QuadQuadProblem::random(5, 2, rng.next_u64()), Manifold::sphere(5));
    const ManifoldPoint x = obj->manifold().point(random_unit_vector(rng, 5));
    const auto sd = steepest_direction(cone, *obj, x);
    if (obj->manifold().norm(sd.v) <= kCriticalityTol) continue;
    if (wolfe_search(cone, *obj, x, sd.v, wp).status != LineSearchStatus::kAccepted) return false;
  }
  return true;
}

}  // namespace

bool run_selftest(std::ostream& log, std::uint64_t seed) {
  const std::vector<Check> checks = {
      {"phi properties", phi_properties},
      {"retraction and transport vs finite differences", geometry},
      {"jacobian action vs finite differences", gradients},
      {"steepest direction vs grid oracle", subproblem_oracle},
      {"Wolfe acceptance along v(x)", line_search_acceptance},
  };
  bool all = true;
  Rng root(seed);
  std::uint64_t stream = 0;
  for (const auto& c : checks) {
    Rng rng = root.split(stream++);
    bool ok = false;
    try {
      ok = c.body(rng);
    } catch (const std::exception& e) {
      fmt::print(log, "  error: {}\n", e.what());
    }
    fmt::print(log, "[{}] {}\n", ok ? "PASS" : "FAIL", c.name);
    all = all && ok;
  }
  return all;
}

}  // namespace nvrcg
