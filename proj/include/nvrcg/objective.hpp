#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "nvrcg/manifold.hpp"

namespace nvrcg {

/// F : M -> R^m together with its first-order information.
///
/// `jacobian_action(x, d)` is DF(x)[d] and must agree with
/// `<riemannian_gradients(x)[i], d>` componentwise.
class VectorObjective {
 public:
  virtual ~VectorObjective() = default;

  virtual const Manifold& manifold() const = 0;
  virtual int num_objectives() const = 0;

  virtual Vector eval(const ManifoldPoint& x) const = 0;
  virtual Vector jacobian_action(const ManifoldPoint& x, const TangentVector& d) const = 0;
  virtual std::vector<TangentVector> riemannian_gradients(const ManifoldPoint& x) const = 0;
};

/// f_i(x) = x^T A_i x + b_i^T x on a manifold in R^n.
class QuadraticObjective final : public VectorObjective {
 public:
  QuadraticObjective(Manifold manifold, std::vector<Matrix> quadratic, std::vector<Vector> linear);

  const Manifold& manifold() const override { return manifold_; }
  int num_objectives() const override { return static_cast<int>(quadratic_.size()); }

  Vector eval(const ManifoldPoint& x) const override;
  Vector jacobian_action(const ManifoldPoint& x, const TangentVector& d) const override;
  std::vector<TangentVector> riemannian_gradients(const ManifoldPoint& x) const override;

  const std::vector<Matrix>& quadratic_terms() const { return quadratic_; }
  const std::vector<Vector>& linear_terms() const { return linear_; }

 private:
  Manifold manifold_;
  std::vector<Matrix> quadratic_;
  std::vector<Vector> linear_;
};

/// f_1 = x^T A x, f_2 = c x on the circle.
struct QuadLinearProblem {
  Matrix A;
  Vector c;

  /// The three 2x2 matrices of the circle benchmark (index 1, 2, 3), c = (1, 1).
  static QuadLinearProblem benchmark(int index);
};

/// f_i = x^T A_i x on S^{n-1}.
struct QuadQuadProblem {
  std::vector<Matrix> A_list;

  /// A_i = Q^T D_i Q with one Haar-random Q shared by all objectives and
  /// diag(D_i) drawn independently, uniform in [i, i + 1] (i = 0, 1, ...).
  /// Deterministic in `seed`.
  static QuadQuadProblem random(int n, int m, std::uint64_t seed);
};

std::shared_ptr<const VectorObjective> make_objective(const QuadLinearProblem& p,
                                                      const Manifold& manifold);
std::shared_ptr<const VectorObjective> make_objective(const QuadQuadProblem& p,
                                                      const Manifold& manifold);

/// Problem description as stored in configs:
///   {"family":"quad_linear","A":[[..],[..]],"c":[..]}   (or "preset":"A1"|"A2"|"A3")
///   {"family":"quad_quad","n":100,"m":2,"seed":42}
/// An optional "manifold" key overrides the default "sphere:n".
struct ProblemSpec {
  nlohmann::json json;

  static ProblemSpec parse(const nlohmann::json& j);
  /// Accepts inline JSON, a path to a JSON file, or shorthands
  /// "table1:A1".."table1:A3" and "table2:<n>[:<seed>]".
  static ProblemSpec from_string(const std::string& text);

  std::string family() const;
  Manifold manifold() const;
  std::shared_ptr<const VectorObjective> build() const;
};

}  // namespace nvrcg
