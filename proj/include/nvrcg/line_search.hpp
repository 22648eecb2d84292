#pragma once

#include <stdexcept>
#include <string_view>

#include "nvrcg/cone_order.hpp"
#include "nvrcg/objective.hpp"

namespace nvrcg {

struct WolfeParams {
  double c1 = 0.1;
  double c2 = 0.6;
  double t_init = 1.0;
  double t_min = 1e-4;
  int max_expansions = 30;
  int max_zoom = 50;
  bool strong = true;

  /// Throws std::invalid_argument unless 0 < c1 < c2 < 1, t_init > 0, t_min > 0.
  void validate() const;
};

enum class LineSearchStatus { kAccepted, kStagnated, kMaxIter };
std::string_view to_string(LineSearchStatus s);

struct LineSearchOutcome {
  double t = 0.0;
  ManifoldPoint x_new;
  Vector F_new;
  double psi_at_t = 0.0;
  int evals = 0;
  LineSearchStatus status = LineSearchStatus::kMaxIter;
};

/// Thrown when a line search is started along a direction that is not K-descent.
class InvalidDirection : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// psi_{x,d}(t d) = phi(DF(R_x(t d))[DR_x(t d)[d]]).
double psi(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
           const TangentVector& d, double t);

/// F(R_x(t d)) <=_K F(x) + c1 t psi0 e.
bool check_armijo(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
                  const TangentVector& d, double t, double c1, const Vector& F_x, double psi0);

/// Weak: psi(t) >= c2 psi0. Strong: |psi(t)| <= c2 |psi0|.
bool check_curvature(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
                     const TangentVector& d, double t, double c2, double psi0, bool strong);

/// Bracketing phase (doubling from t_init) followed by bisection zoom on the
/// vector Armijo test and the scalar psi. Returns the accepted step, or the
/// best Armijo-feasible step when the bracket shrinks below t_min.
LineSearchOutcome wolfe_search(const ConeSpec& cone, const VectorObjective& obj,
                               const ManifoldPoint& x, const TangentVector& d,
                               const WolfeParams& params);

}  // namespace nvrcg
