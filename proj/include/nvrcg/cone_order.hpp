#pragma once

#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace nvrcg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Ordering cone K described by a finite generator set C of its dual cone
/// together with the vector e in K used by the sufficient-decrease test.
///
/// Generators are stored row-wise. The partial order is tested through the
/// dual generators, which is exact when K is polyhedral and K* = cone(C).
class ConeSpec {
 public:
  /// Throws std::invalid_argument if a generator is zero, dimensions
  /// disagree, or some generator violates 0 < <w, e> <= 1.
  ConeSpec(Matrix generators, Vector e);

  /// Canonical basis of R^m with e = (1, ..., 1): the Pareto order.
  static ConeSpec multiobjective(int m);

  /// Accepts `{"generators": [[...], ...], "e": [...]}` or the preset
  /// string "multiobjective:m".
  static ConeSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  int dim() const { return static_cast<int>(generators_.cols()); }
  int num_generators() const { return static_cast<int>(generators_.rows()); }
  const Matrix& generators() const { return generators_; }
  const Vector& e_vector() const { return e_; }

  /// True when generators are the canonical basis and e is all ones.
  bool is_multiobjective() const { return multiobjective_; }

 private:
  Matrix generators_;
  Vector e_;
  bool multiobjective_ = false;
};

/// phi(y) = max over generators w of <w, y>.
double phi(const ConeSpec& cone, const Vector& y);

/// u <=_K v, i.e. <w, v - u> >= 0 for every generator w.
bool leq_k(const ConeSpec& cone, const Vector& u, const Vector& v);

/// True iff phi(DF(x)[d]) < 0 for the supplied Jacobian action.
bool is_k_descent(const ConeSpec& cone, const Vector& jacobian_action);

}  // namespace nvrcg
