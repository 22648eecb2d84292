#include "nvrcg/line_search.hpp"

#include <cmath>

#include <fmt/format.h>

namespace nvrcg {
namespace {

struct Trial {
  double t = 0.0;
  ManifoldPoint x;
  Vector F;
  bool armijo = false;
  double psi = 0.0;
  bool psi_known = false;
};

class Evaluator {
 public:
  Evaluator(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
            const TangentVector& d, const Vector& F_x, double psi0, const WolfeParams& p)
      : cone_(cone), obj_(obj), x_(x), d_(d), F_x_(F_x), psi0_(psi0), p_(p) {}

  Trial armijo(double t) {
    ++evals;
    Trial tr;
    tr.t = t;
    tr.x = obj_.manifold().retract(x_, t * d_);
    tr.F = obj_.eval(tr.x);
    tr.armijo = leq_k(cone_, tr.F, F_x_ + p_.c1 * t * psi0_ * cone_.e_vector());
    return tr;
  }

  void slope(Trial& tr) {
    ++evals;
    tr.psi = psi(cone_, obj_, x_, d_, tr.t);
    tr.psi_known = true;
  }

  bool curvature(const Trial& tr) const {
    if (p_.strong) return std::abs(tr.psi) <= p_.c2 * std::abs(psi0_);
    return tr.psi >= p_.c2 * psi0_;
  }

  int evals = 0;

 private:
  const ConeSpec& cone_;
  const VectorObjective& obj_;
  const ManifoldPoint& x_;
  const TangentVector& d_;
  const Vector& F_x_;
  double psi0_;
  const WolfeParams& p_;
};

LineSearchOutcome finish(const Trial& tr, int evals, LineSearchStatus status) {
  return {tr.t, tr.x, tr.F, tr.psi, evals, status};
}

}  // namespace

void WolfeParams::validate() const {
  if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
    throw std::invalid_argument(fmt::format("need 0 < c1 < c2 < 1, got c1={} c2={}", c1, c2));
  }
  if (!(t_init > 0.0) || !(t_min > 0.0)) {
    throw std::invalid_argument("t_init and t_min must be positive");
  }
  if (max_expansions < 0 || max_zoom < 0) {
    throw std::invalid_argument("iteration caps must be nonnegative");
  }
}

std::string_view to_string(LineSearchStatus s) {
  switch (s) {
    case LineSearchStatus::kAccepted: return "accepted";
    case LineSearchStatus::kStagnated: return "stagnated";
    case LineSearchStatus::kMaxIter: return "max-iter";
  }
  return "?";
}

double psi(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
           const TangentVector& d, double t) {
  if (t < 0.0) throw std::invalid_argument("psi: t must be nonnegative");
  const Manifold& mf = obj.manifold();
  const TangentVector step = t * d;
  const TangentVector moved = mf.transport_diff_retraction(x, step, d);
  return phi(cone, obj.jacobian_action(moved.base, moved));
}

bool check_armijo(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
                  const TangentVector& d, double t, double c1, const Vector& F_x, double psi0) {
  const Vector F_t = obj.eval(obj.manifold().retract(x, t * d));
  return leq_k(cone, F_t, F_x + c1 * t * psi0 * cone.e_vector());
}

bool check_curvature(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x,
                     const TangentVector& d, double t, double c2, double psi0, bool strong) {
  const double value = psi(cone, obj, x, d, t);
  if (strong) return std::abs(value) <= c2 * std::abs(psi0);
  return value >= c2 * psi0;
}

LineSearchOutcome wolfe_search(const ConeSpec& cone, const VectorObjective& obj,
                               const ManifoldPoint& x, const TangentVector& d,
                               const WolfeParams& params) {
  params.validate();
  const double psi0 = psi(cone, obj, x, d, 0.0);
  if (!(psi0 < 0.0)) {
    throw InvalidDirection(fmt::format("line search needs psi(0) < 0, got {}", psi0));
  }
  const Vector F_x = obj.eval(x);
  Evaluator ev(cone, obj, x, d, F_x, psi0, params);

  // lo is Armijo-feasible with psi(lo) < c2 psi0; hi fails Armijo or has psi(hi) > 0.
  Trial lo;
  lo.t = 0.0;
  lo.x = x;
  lo.F = F_x;
  lo.armijo = true;
  lo.psi = psi0;
  lo.psi_known = true;
  double hi = -1.0;

  double t = params.t_init;
  for (int i = 0; i <= params.max_expansions; ++i) {
    Trial tr = ev.armijo(t);
    if (!tr.armijo) {
      hi = t;
      break;
    }
    ev.slope(tr);
    if (ev.curvature(tr)) return finish(tr, ev.evals, LineSearchStatus::kAccepted);
    if (tr.psi >= 0.0) {
      hi = t;
      break;
    }
    lo = std::move(tr);
    t *= 2.0;
  }
  if (hi < 0.0) return finish(lo, ev.evals, LineSearchStatus::kMaxIter);

  for (int i = 0; i < params.max_zoom; ++i) {
    if (hi - lo.t < params.t_min) return finish(lo, ev.evals, LineSearchStatus::kStagnated);
    Trial tr = ev.armijo(0.5 * (lo.t + hi));
    if (!tr.armijo) {
      hi = tr.t;
      continue;
    }
    ev.slope(tr);
    if (ev.curvature(tr)) return finish(tr, ev.evals, LineSearchStatus::kAccepted);
    if (tr.psi >= 0.0) {
      hi = tr.t;
    } else {
      lo = std::move(tr);
    }
  }
  return finish(lo, ev.evals, LineSearchStatus::kMaxIter);
}

}  // namespace nvrcg
