#include "nvrcg/descent_direction.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace nvrcg {
namespace {

double gram_scale(const Matrix& gram) {
  return std::max(1.0, gram.diagonal().maxCoeff());
}

SimplexQpResult solve_pair(const Matrix& gram) {
  const double denom = gram(0, 0) - 2.0 * gram(0, 1) + gram(1, 1);
  double l0 = 0.5;
  if (denom > 1e-300) l0 = std::clamp((gram(1, 1) - gram(0, 1)) / denom, 0.0, 1.0);
  SimplexQpResult out;
  out.lambda = Vector(2);
  out.lambda << l0, 1.0 - l0;
  out.residual = simplex_qp_residual(gram, out.lambda);
  return out;
}

SimplexQpResult solve_spg(const Matrix& gram, const SubproblemOptions& opts) {
  constexpr int kMemory = 10;
  constexpr double kGamma = 1e-4;
  constexpr double kAlphaMin = 1e-30;
  constexpr double kAlphaMax = 1e30;

  const Eigen::Index m = gram.rows();
  const Matrix g = gram / gram_scale(gram);
  auto value = [&](const Vector& l) { return 0.5 * l.dot(g * l); };

  Vector lambda = Vector::Constant(m, 1.0 / static_cast<double>(m));
  Vector grad = g * lambda;
  double f = value(lambda);
  std::deque<double> history{f};
  double alpha = 1.0;

  Vector best = lambda;
  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iter; ++it) {
    const double res = (lambda - project_simplex(lambda - grad)).lpNorm<Eigen::Infinity>();
    if (res < best_res) {
      best_res = res;
      best = lambda;
    }
    if (res <= opts.tol) return {lambda, res, it};

    const Vector dir = project_simplex(lambda - alpha * grad) - lambda;
    const double slope = grad.dot(dir);
    const double ref = *std::max_element(history.begin(), history.end());
    double step = 1.0;
    Vector trial = lambda + dir;
    double f_trial = value(trial);
    while (f_trial > ref + kGamma * step * slope && step > 1e-20) {
      step *= 0.5;
      trial = lambda + step * dir;
      f_trial = value(trial);
    }
    const Vector s = trial - lambda;
    const Vector grad_new = g * trial;
    const double sy = s.dot(grad_new - grad);
    alpha = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, kAlphaMin, kAlphaMax) : kAlphaMax;

    lambda = trial;
    grad = grad_new;
    f = f_trial;
    history.push_back(f);
    if (history.size() > kMemory) history.pop_front();
  }
  const double res = (lambda - project_simplex(lambda - grad)).lpNorm<Eigen::Infinity>();
  if (res <= opts.tol) return {lambda, res, opts.max_iter};
  throw SubproblemFailure(
      fmt::format("simplex QP: residual {:.3e} after {} iterations", best_res, opts.max_iter),
      best, best_res);
}

}  // namespace

Vector project_simplex(const Vector& y) {
  const Eigen::Index m = y.size();
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  return (y.array() - tau).max(0.0).matrix();
}

double simplex_qp_residual(const Matrix& gram, const Vector& lambda) {
  const Vector grad = gram * lambda / gram_scale(gram);
  return (lambda - project_simplex(lambda - grad)).lpNorm<Eigen::Infinity>();
}

SimplexQpResult solve_simplex_qp(const Matrix& gram, const SubproblemOptions& opts) {
  if (gram.rows() != gram.cols() || gram.rows() == 0) {
    throw std::invalid_argument("simplex QP needs a nonempty square Gram matrix");
  }
  if (!(opts.tol > 0.0)) throw std::invalid_argument("subproblem tolerance must be positive");
  if (gram.rows() == 1) return {Vector::Ones(1), 0.0, 0};
  if (gram.rows() == 2) return solve_pair(gram);
  return solve_spg(gram, opts);
}

SteepestDescentResult steepest_direction(const ConeSpec& cone, const VectorObjective& obj,
                                         const ManifoldPoint& x, const SubproblemOptions& opts) {
  if (cone.dim() != obj.num_objectives()) {
    throw std::invalid_argument(fmt::format("cone dimension {} vs {} objectives", cone.dim(),
                                            obj.num_objectives()));
  }
  const Manifold& mf = obj.manifold();
  const auto grads = obj.riemannian_gradients(x);
  const int n = mf.ambient_dim();
  const int gens = cone.num_generators();

  Matrix scalarized(n, gens);
  if (cone.is_multiobjective()) {
    for (int j = 0; j < gens; ++j) scalarized.col(j) = grads[j].components;
  } else {
    Matrix raw(n, obj.num_objectives());
    for (int i = 0; i < obj.num_objectives(); ++i) raw.col(i) = grads[i].components;
    const Matrix combined = raw * cone.generators().transpose();
    for (int j = 0; j < gens; ++j) {
      scalarized.col(j) = mf.project_tangent(x, combined.col(j)).components;
    }
  }

  const Matrix gram = scalarized.transpose() * scalarized;
  const SimplexQpResult qp = solve_simplex_qp(gram, opts);

  SteepestDescentResult out{mf.tangent(x, -(scalarized * qp.lambda)), 0.0, 0.0, qp.lambda,
                            qp.iterations, qp.residual};
  out.phi_dfv = phi(cone, obj.jacobian_action(x, out.v));
  out.theta = out.phi_dfv + 0.5 * out.v.components.squaredNorm();
  return out;
}

BruteForceResult brute_force_direction(const ConeSpec& cone, const VectorObjective& obj,
                                       const ManifoldPoint& x, int grid_resolution) {
  const Manifold& mf = obj.manifold();
  const int k = mf.tangent_dim();
  if (k > 3) {
    throw std::domain_error(fmt::format("brute-force oracle supports tangent dim <= 3, got {}", k));
  }
  if (grid_resolution < 100) throw std::invalid_argument("grid_resolution must be >= 100");

  double max_grad = 0.0;
  for (const auto& g : obj.riemannian_gradients(x)) max_grad = std::max(max_grad, g.components.norm());
  const double r_max = 2.0 * max_grad;
  const double dr = r_max / grid_resolution;

  const Matrix basis = mf.tangent_basis(x);
  std::vector<Vector> directions;
  if (k == 1) {
    directions = {basis.col(0), -basis.col(0)};
  } else if (k == 2) {
    for (int a = 0; a < grid_resolution; ++a) {
      const double ang = 2.0 * std::numbers::pi * a / grid_resolution;
      directions.push_back(std::cos(ang) * basis.col(0) + std::sin(ang) * basis.col(1));
    }
  } else {
    const int n_polar = grid_resolution / 4;
    const int n_azimuth = grid_resolution / 2;
    for (int p = 0; p <= n_polar; ++p) {
      const double pol = std::numbers::pi * p / n_polar;
      for (int a = 0; a < n_azimuth; ++a) {
        const double az = 2.0 * std::numbers::pi * a / n_azimuth;
        directions.push_back(std::sin(pol) * std::cos(az) * basis.col(0) +
                             std::sin(pol) * std::sin(az) * basis.col(1) +
                             std::cos(pol) * basis.col(2));
      }
    }
  }

  BruteForceResult best{mf.zero(x), 0.0, dr};
  if (r_max == 0.0) return best;
  for (const Vector& u : directions) {
    const TangentVector dir = mf.tangent(x, u);
    const double slope = phi(cone, obj.jacobian_action(x, dir));
    for (int q = 1; q <= grid_resolution; ++q) {
      const double r = dr * q;
      const double val = r * slope + 0.5 * r * r;
      if (val < best.value) {
        best.value = val;
        best.d = r * dir;
      }
    }
  }
  return best;
}

}  // namespace nvrcg
