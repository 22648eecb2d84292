#include "nvrcg/manifold.hpp"

#include <cmath>
#include <charconv>

#include <fmt/format.h>

namespace nvrcg {
namespace {

bool same_base(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a - b).lpNorm<Eigen::Infinity>() <= Manifold::kBaseTol;
}

}  // namespace

Manifold::Manifold(ManifoldKind kind, int ambient_dim) : id_{kind, ambient_dim} {
  if (ambient_dim < 1 || (kind == ManifoldKind::kSphere && ambient_dim < 2)) {
    throw std::invalid_argument(fmt::format("invalid ambient dimension {} for {}", ambient_dim,
                                            kind == ManifoldKind::kSphere ? "sphere" : "euclidean"));
  }
}

Manifold Manifold::parse(std::string_view name) {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument(fmt::format("manifold name '{}' lacks ':n'", name));
  }
  const auto kind_str = name.substr(0, colon);
  const auto dim_str = name.substr(colon + 1);
  int n = 0;
  const auto [ptr, ec] = std::from_chars(dim_str.data(), dim_str.data() + dim_str.size(), n);
  if (ec != std::errc() || ptr != dim_str.data() + dim_str.size()) {
    throw std::invalid_argument(fmt::format("bad dimension in manifold name '{}'", name));
  }
  if (kind_str == "sphere") return sphere(n);
  if (kind_str == "euclidean") return euclidean(n);
  throw std::invalid_argument(fmt::format("unknown manifold '{}'", kind_str));
}

std::string Manifold::name() const {
  return fmt::format("{}:{}", kind() == ManifoldKind::kSphere ? "sphere" : "euclidean",
                     ambient_dim());
}

int Manifold::tangent_dim() const {
  return kind() == ManifoldKind::kSphere ? ambient_dim() - 1 : ambient_dim();
}

ManifoldPoint Manifold::point(Vector coords, Validation mode) const {
  if (coords.size() != ambient_dim()) {
    throw std::invalid_argument(
        fmt::format("point has dimension {}, manifold {} expects {}", coords.size(), name(),
                    ambient_dim()));
  }
  if (!coords.allFinite()) throw std::invalid_argument("point has non-finite coordinates");
  if (kind() == ManifoldKind::kSphere) {
    const double nrm = coords.norm();
    if (mode == Validation::kStrict) {
      if (std::abs(nrm - 1.0) > kPointTol) {
        throw std::invalid_argument(fmt::format("point not on sphere: |x| = {}", nrm));
      }
    } else {
      if (nrm < kDegenerateNorm) throw std::invalid_argument("cannot normalize zero vector");
      coords /= nrm;
    }
  }
  return {std::move(coords), id_};
}

TangentVector Manifold::tangent(const ManifoldPoint& x, Vector components,
                                Validation mode) const {
  check_point(x);
  if (components.size() != ambient_dim()) {
    throw std::invalid_argument(fmt::format("tangent has dimension {}, expected {}",
                                            components.size(), ambient_dim()));
  }
  if (kind() == ManifoldKind::kSphere) {
    const double normal = x.coords.dot(components);
    if (mode == Validation::kStrict && std::abs(normal) > kTangentTol) {
      throw std::invalid_argument(fmt::format("vector not tangent: <x, v> = {}", normal));
    }
    components -= normal * x.coords;
  }
  return {x, std::move(components)};
}

TangentVector Manifold::zero(const ManifoldPoint& x) const {
  check_point(x);
  return {x, Vector::Zero(ambient_dim())};
}

double Manifold::inner(const TangentVector& u, const TangentVector& v) const {
  if (!same_base(u.base.coords, v.base.coords) || !(u.base.manifold == v.base.manifold)) {
    throw std::invalid_argument("inner: tangent vectors have different base points");
  }
  return u.components.dot(v.components);
}

double Manifold::norm(const TangentVector& v) const { return v.components.norm(); }

TangentVector Manifold::project_tangent(const ManifoldPoint& x, const Vector& a) const {
  check_point(x);
  if (a.size() != ambient_dim()) {
    throw std::invalid_argument(
        fmt::format("project_tangent: dimension {} vs {}", a.size(), ambient_dim()));
  }
  if (kind() == ManifoldKind::kEuclidean) return {x, a};
  return {x, a - x.coords.dot(a) * x.coords};
}

ManifoldPoint Manifold::retract(const ManifoldPoint& x, const TangentVector& v) const {
  check_base(x, v, "retract");
  if ((v.components.array() == 0.0).all()) return {x.coords, id_};  // R_x(0) = x bit for bit
  Vector y = x.coords + v.components;
  if (kind() == ManifoldKind::kSphere) {
    const double nrm = y.norm();
    if (nrm < kDegenerateNorm) {
      throw DegenerateRetraction(fmt::format("retraction degenerate: |x + v| = {}", nrm));
    }
    y /= nrm;
  }
  return {std::move(y), id_};
}

TangentVector Manifold::transport_diff_retraction(const ManifoldPoint& x, const TangentVector& d,
                                                  const TangentVector& u) const {
  check_base(x, d, "transport");
  check_base(x, u, "transport");
  if (kind() == ManifoldKind::kEuclidean) return {retract(x, d), u.components};
  const Vector y = x.coords + d.components;
  const double nrm = y.norm();
  if (nrm < kDegenerateNorm) {
    throw DegenerateRetraction(fmt::format("transport degenerate: |x + d| = {}", nrm));
  }
  ManifoldPoint target{y / nrm, id_};
  Vector w = (u.components - target.coords.dot(u.components) * target.coords) / nrm;
  return {std::move(target), std::move(w)};
}

Matrix Manifold::tangent_basis(const ManifoldPoint& x) const {
  check_point(x);
  const int n = ambient_dim();
  if (kind() == ManifoldKind::kEuclidean) return Matrix::Identity(n, n);
  // Householder completion of x to an orthonormal basis; drop the x column.
  Eigen::HouseholderQR<Matrix> qr(x.coords);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - 1);
}

void Manifold::check_point(const ManifoldPoint& x) const {
  if (!(x.manifold == id_)) {
    throw std::invalid_argument(fmt::format("point does not belong to {}", name()));
  }
}

void Manifold::check_base(const ManifoldPoint& x, const TangentVector& v,
                          std::string_view what) const {
  check_point(x);
  if (!same_base(x.coords, v.base.coords)) {
    throw std::invalid_argument(fmt::format("{}: tangent vector is based elsewhere", what));
  }
}

TangentVector operator*(double a, const TangentVector& v) { return {v.base, a * v.components}; }

TangentVector operator+(const TangentVector& u, const TangentVector& v) {
  if (!same_base(u.base.coords, v.base.coords)) {
    throw std::invalid_argument("adding tangent vectors at different base points");
  }
  return {u.base, u.components + v.components};
}

}  // namespace nvrcg
