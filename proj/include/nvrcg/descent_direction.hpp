#pragma once

#include <stdexcept>

#include "nvrcg/cone_order.hpp"
#include "nvrcg/objective.hpp"

namespace nvrcg {

/// Threshold on |v(x)| below which x is treated as K-critical.
inline constexpr double kCriticalityTol = 1e-4;

struct SubproblemOptions {
  double tol = 1e-10;     ///< KKT residual of the simplex QP
  int max_iter = 10000;
};

/// The simplex QP did not reach its tolerance within the iteration cap.
class SubproblemFailure : public std::runtime_error {
 public:
  SubproblemFailure(const std::string& what, Vector best_lambda, double residual)
      : std::runtime_error(what), best_lambda(std::move(best_lambda)), residual(residual) {}
  Vector best_lambda;
  double residual;
};

struct SimplexQpResult {
  Vector lambda;
  double residual = 0.0;
  int iterations = 0;
};

/// Euclidean projection onto {l >= 0, sum l = 1}.
Vector project_simplex(const Vector& y);

/// Minimizes 1/2 l^T G l over the unit simplex for a PSD Gram matrix G.
/// One and two variables are solved in closed form; larger problems use
/// spectral projected gradient with a nonmonotone line search.
SimplexQpResult solve_simplex_qp(const Matrix& gram, const SubproblemOptions& opts = {});

/// KKT residual |l - P(l - G l)|_inf, with G scaled to unit max diagonal.
double simplex_qp_residual(const Matrix& gram, const Vector& lambda);

struct SteepestDescentResult {
  TangentVector v;
  double theta = 0.0;          ///< phi(DF(x) v) + |v|^2 / 2
  double phi_dfv = 0.0;        ///< phi(DF(x) v) = psi_{x,v}(0)
  Vector lambda;               ///< weights on the scalarized gradients
  int subproblem_iterations = 0;
  double kkt_residual = 0.0;
};

/// v(x) = argmin_d phi(DF(x) d) + |d|^2 / 2, solved through its dual
/// v = -sum_j l_j g_j with g_j the gradient of <w_j, F> and l on the simplex.
SteepestDescentResult steepest_direction(const ConeSpec& cone, const VectorObjective& obj,
                                         const ManifoldPoint& x,
                                         const SubproblemOptions& opts = {});

struct BruteForceResult {
  TangentVector d;
  double value = 0.0;
  double radius_spacing = 0.0;
};

/// Grid search for v(x) over radii in [0, 2 max_i |grad f_i|] and an angular
/// grid of tangent directions. Test oracle; tangent dimension must be <= 3.
BruteForceResult brute_force_direction(const ConeSpec& cone, const VectorObjective& obj,
                                       const ManifoldPoint& x, int grid_resolution);

}  // namespace nvrcg
