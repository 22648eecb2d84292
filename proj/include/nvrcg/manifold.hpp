#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "nvrcg/cone_order.hpp"

namespace nvrcg {

/// Raised when the normalization retraction would divide by ~0.
class DegenerateRetraction : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ManifoldKind { kSphere, kEuclidean };

/// Identifies the manifold a point belongs to.
struct ManifoldId {
  ManifoldKind kind = ManifoldKind::kEuclidean;
  int ambient_dim = 0;

  friend bool operator==(const ManifoldId&, const ManifoldId&) = default;
};

/// A point on a manifold in ambient coordinates.
struct ManifoldPoint {
  Vector coords;
  ManifoldId manifold;
};

/// A tangent vector, always paired with its base point.
struct TangentVector {
  ManifoldPoint base;
  Vector components;
};

/// How strictly constructors enforce the manifold invariants.
enum class Validation {
  kProject,  ///< normalize points and project tangents onto the manifold
  kStrict,   ///< reject anything outside tolerance
};

/// Unit sphere S^{n-1} in R^n or Euclidean R^n, selected by name
/// ("sphere:n" / "euclidean:n").
///
/// Both use the ambient Euclidean metric. The sphere retraction is
/// R_x(v) = (x + v) / |x + v| and the only vector transport is the
/// differentiated retraction DR_x(d)[u].
class Manifold {
 public:
  static constexpr double kPointTol = 1e-12;
  static constexpr double kTangentTol = 1e-10;
  static constexpr double kBaseTol = 1e-12;
  static constexpr double kDegenerateNorm = 1e-14;

  Manifold(ManifoldKind kind, int ambient_dim);
  static Manifold sphere(int n) { return {ManifoldKind::kSphere, n}; }
  static Manifold euclidean(int n) { return {ManifoldKind::kEuclidean, n}; }
  static Manifold parse(std::string_view name);

  std::string name() const;
  ManifoldId id() const { return id_; }
  ManifoldKind kind() const { return id_.kind; }
  int ambient_dim() const { return id_.ambient_dim; }
  int tangent_dim() const;

  ManifoldPoint point(Vector coords, Validation mode = Validation::kProject) const;
  TangentVector tangent(const ManifoldPoint& x, Vector components,
                        Validation mode = Validation::kProject) const;
  TangentVector zero(const ManifoldPoint& x) const;

  double inner(const TangentVector& u, const TangentVector& v) const;
  double norm(const TangentVector& v) const;

  /// Orthogonal projection of an ambient vector onto T_x M.
  TangentVector project_tangent(const ManifoldPoint& x, const Vector& a) const;

  ManifoldPoint retract(const ManifoldPoint& x, const TangentVector& v) const;

  /// DR_x(d)[u], based at retract(x, d).
  TangentVector transport_diff_retraction(const ManifoldPoint& x, const TangentVector& d,
                                          const TangentVector& u) const;

  /// Orthonormal basis of T_x M as matrix columns (ambient coordinates).
  Matrix tangent_basis(const ManifoldPoint& x) const;

 private:
  void check_point(const ManifoldPoint& x) const;
  void check_base(const ManifoldPoint& x, const TangentVector& v, std::string_view what) const;

  ManifoldId id_;
};

/// Linear combination helpers that keep the base point.
TangentVector operator*(double a, const TangentVector& v);
TangentVector operator+(const TangentVector& u, const TangentVector& v);

}  // namespace nvrcg
