#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "nvrcg/cone_order.hpp"
#include "nvrcg/random.hpp"

using namespace nvrcg;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

ConeSpec three_generators() {
  Matrix g(3, 2);
  const double s = 1.0 / std::sqrt(2.0);
  g << 1, 0, 0, 1, s, s;
  return ConeSpec(g, vec({0.5, 0.5}));
}

}  // namespace

TEST_CASE("phi examples") {
  const ConeSpec pareto = ConeSpec::multiobjective(2);
  CHECK(phi(pareto, vec({3, -1})) == 3.0);
  CHECK(phi(pareto, vec({0, 0})) == 0.0);
  CHECK(phi(three_generators(), vec({1, 1})) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(phi(three_generators(), vec({0, 0})) == 0.0);
}

TEST_CASE("leq_k examples") {
  const ConeSpec c = ConeSpec::multiobjective(2);
  CHECK(leq_k(c, vec({1, 2}), vec({2, 2})));
  CHECK_FALSE(leq_k(c, vec({1, 2}), vec({2, 1})));
  CHECK(leq_k(c, vec({-3, 4}), vec({-3, 4})));
}

TEST_CASE("is_k_descent examples") {
  const ConeSpec c = ConeSpec::multiobjective(2);
  CHECK(is_k_descent(c, vec({-1, -2})));
  CHECK_FALSE(is_k_descent(c, vec({-1, 0})));
  CHECK_FALSE(is_k_descent(c, vec({1, -5})));
}

TEST_CASE("scalar cone reduces phi to the identity") {
  const ConeSpec c = ConeSpec::multiobjective(1);
  for (double y : {-2.5, 0.0, 1e-300, 7.0}) CHECK(phi(c, vec({y})) == y);
}

TEST_CASE("dimension mismatches throw") {
  const ConeSpec c = ConeSpec::multiobjective(2);
  CHECK_THROWS_AS(phi(c, vec({1, 2, 3})), std::invalid_argument);
  CHECK_THROWS_AS(leq_k(c, vec({1, 2}), vec({1})), std::invalid_argument);
  CHECK_THROWS_AS(is_k_descent(c, vec({1})), std::invalid_argument);
}

TEST_CASE("invalid cones are rejected") {
  Matrix zero_row(2, 2);
  zero_row << 1, 0, 0, 0;
  CHECK_THROWS_AS(ConeSpec(zero_row, vec({1, 1})), std::invalid_argument);
  CHECK_THROWS_AS(ConeSpec(Matrix::Identity(2, 2), vec({1, 1, 1})), std::invalid_argument);
  // <w, e> must lie in (0, 1].
  CHECK_THROWS_AS(ConeSpec(Matrix::Identity(2, 2), vec({2, 1})), std::invalid_argument);
  CHECK_THROWS_AS(ConeSpec(Matrix::Identity(2, 2), vec({1, -1})), std::invalid_argument);
  CHECK_THROWS_AS(ConeSpec::multiobjective(0), std::invalid_argument);
}

TEST_CASE("json presets and round trip") {
  const ConeSpec preset = ConeSpec::from_json("multiobjective:3");
  CHECK(preset.is_multiobjective());
  CHECK(preset.dim() == 3);
  CHECK(preset.num_generators() == 3);
  CHECK(preset.e_vector() == Vector::Ones(3));

  const ConeSpec c = three_generators();
  const ConeSpec back = ConeSpec::from_json(c.to_json());
  CHECK(back.generators() == c.generators());
  CHECK(back.e_vector() == c.e_vector());
  CHECK_FALSE(back.is_multiobjective());

  CHECK_THROWS(ConeSpec::from_json("pareto:2"));
  CHECK_THROWS(ConeSpec::from_json(nlohmann::json{{"generators", 3}}));
}

TEST_CASE("property: subadditivity, monotonicity, Lipschitz-1") {
  Rng rng(2024);
  for (int m : {1, 2, 5}) {
    const ConeSpec c = ConeSpec::multiobjective(m);
    for (int trial = 0; trial < 2000; ++trial) {
      const Vector y = rng.normal_vector(m);
      const Vector z = rng.normal_vector(m);
      const double slack = 1e-12 * (1.0 + y.cwiseAbs().maxCoeff() + z.cwiseAbs().maxCoeff());
      REQUIRE(phi(c, y + z) <= phi(c, y) + phi(c, z) + slack);
      REQUIRE(std::abs(phi(c, y) - phi(c, z)) <= (y - z).norm() + slack);
      const Vector above = y + rng.normal_vector(m).cwiseAbs();
      REQUIRE(leq_k(c, y, above));
      REQUIRE(phi(c, y) <= phi(c, above) + slack);
    }
  }
}

TEST_CASE("property: positive homogeneity and e-shift") {
  Rng rng(3);
  const ConeSpec c = ConeSpec::multiobjective(4);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector y = rng.normal_vector(4);
    const double a = rng.uniform(0.0, 10.0);
    CHECK(phi(c, a * y) == doctest::Approx(a * phi(c, y)).epsilon(1e-12));
    // <w, e> = 1 for every canonical generator.
    CHECK(phi(c, y + a * c.e_vector()) == doctest::Approx(phi(c, y) + a).epsilon(1e-12));
  }
}
