#include "nvrcg/cg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace nvrcg {
namespace {

constexpr double kDenominatorTol = 1e-14;
constexpr double kAssertSlack = 1e-10;

std::optional<double> ratio(double num, double den) {
  if (std::abs(den) < kDenominatorTol) return std::nullopt;
  return num / den;
}

std::optional<double> hybrid(std::optional<double> a, std::optional<double> b) {
  if (!a || !b) return std::nullopt;
  return std::max(0.0, std::min(*a, *b));
}

double slack(double a, double b) {
  return kAssertSlack * std::max({1.0, std::abs(a), std::abs(b)});
}

std::string vec(const Vector& v) {
  return fmt::format("[{:.17g}]", fmt::join(v.begin(), v.end(), ", "));
}

std::string dump_state(const SearchState& s, double beta, bool restarted) {
  std::ostringstream out;
  out << fmt::format("k = {}\nx = {}\nF(x) = {}\nv = {}\nd = {}\n", s.k, vec(s.x.coords),
                     vec(s.F_x), vec(s.v.components), vec(s.d.components));
  out << fmt::format("theta = {:.17g}\npsi_v0 = {:.17g}\npsi_d0 = {:.17g}\nbeta = {:.17g}\n",
                     s.theta, s.psi_v0, s.psi_d0, beta);
  out << fmt::format("restarted = {}\n", restarted);
  if (s.prev) {
    out << fmt::format(
        "prev.x = {}\nprev.d = {}\nprev.t = {:.17g}\nprev.psi_v0 = {:.17g}\n"
        "prev.psi_d0 = {:.17g}\nprev.psi_d_at_t = {:.17g}\n",
        vec(s.prev->x.coords), vec(s.prev->d.components), s.prev->t, s.prev->psi_v0,
        s.prev->psi_d0, s.prev->psi_d_at_t);
  }
  if (s.psi_cross) out << fmt::format("psi_cross = {:.17g}\n", *s.psi_cross);
  return out.str();
}

// psi_{., T^{k-1}(v_k)}(0) under the chosen reading.
double cross_term(const ConeSpec& cone, const VectorObjective& obj, const PreviousStep& prev,
                  const TangentVector& v, CrossTermReading reading) {
  const Manifold& mf = obj.manifold();
  if (reading == CrossTermReading::kAtPrevious) {
    const TangentVector pulled = mf.project_tangent(prev.x, v.components);
    return phi(cone, obj.jacobian_action(prev.x, pulled));
  }
  const TangentVector step = prev.t * prev.d;
  const auto grads = obj.riemannian_gradients(prev.x);
  Vector y(obj.num_objectives());
  for (int i = 0; i < obj.num_objectives(); ++i) {
    y(i) = mf.transport_diff_retraction(prev.x, step, grads[i]).components.dot(v.components);
  }
  return phi(cone, y);
}

class Checker {
 public:
  Checker(AssertLevel level, const SearchState& state, double beta, bool restarted)
      : level_(level), state_(state), beta_(beta), restarted_(restarted) {}

  void require(AssertLevel at, bool ok, std::string_view what) const {
    if (level_ == AssertLevel::kOff || static_cast<int>(level_) < static_cast<int>(at) || ok) {
      return;
    }
    throw AssertionViolation(fmt::format("invariant violated at k = {}: {}", state_.k, what),
                             dump_state(state_, beta_, restarted_));
  }

 private:
  AssertLevel level_;
  const SearchState& state_;
  double beta_;
  bool restarted_;
};

bool uses_cd_bound(BetaKind k) { return k == BetaKind::kCD || k == BetaKind::kHybridLsCd; }
bool uses_dy_bound(BetaKind k) { return k == BetaKind::kDY || k == BetaKind::kHybridHsDy; }

}  // namespace

std::string_view to_string(BetaKind kind) {
  switch (kind) {
    case BetaKind::kFR: return "FR";
    case BetaKind::kCD: return "CD";
    case BetaKind::kDY: return "DY";
    case BetaKind::kPRP: return "PRP";
    case BetaKind::kLS: return "LS";
    case BetaKind::kHS: return "HS";
    case BetaKind::kHybridPrpFr: return "PRP-FR";
    case BetaKind::kHybridLsCd: return "LS-CD";
    case BetaKind::kHybridHsDy: return "HS-DY";
    case BetaKind::kZero: return "SD";
  }
  return "?";
}

BetaKind parse_beta_kind(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  std::replace(upper.begin(), upper.end(), '_', '-');
  for (BetaKind k : {BetaKind::kFR, BetaKind::kCD, BetaKind::kDY, BetaKind::kPRP, BetaKind::kLS,
                     BetaKind::kHS, BetaKind::kHybridPrpFr, BetaKind::kHybridLsCd,
                     BetaKind::kHybridHsDy, BetaKind::kZero}) {
    if (upper == to_string(k)) return k;
  }
  if (upper == "ZERO") return BetaKind::kZero;
  if (upper == "HYBRID-PRP-FR") return BetaKind::kHybridPrpFr;
  if (upper == "HYBRID-LS-CD") return BetaKind::kHybridLsCd;
  if (upper == "HYBRID-HS-DY") return BetaKind::kHybridHsDy;
  throw std::invalid_argument(fmt::format("unknown beta variant '{}'", name));
}

bool is_raw_beta(BetaKind kind) {
  return kind == BetaKind::kPRP || kind == BetaKind::kLS || kind == BetaKind::kHS;
}

bool needs_cross_term(BetaKind kind) {
  return is_raw_beta(kind) || kind == BetaKind::kHybridPrpFr || kind == BetaKind::kHybridLsCd ||
         kind == BetaKind::kHybridHsDy;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kCritical: return "critical";
    case Termination::kStepStagnated: return "step_stagnated";
    case Termination::kMaxIter: return "max_iter";
    case Termination::kDegenerate: return "degenerate";
  }
  return "?";
}

std::optional<double> compute_beta(BetaKind kind, const SearchState& state) {
  if (kind == BetaKind::kZero) return 0.0;
  if (!state.prev) throw std::invalid_argument("compute_beta needs the previous step (k >= 1)");
  const PreviousStep& p = *state.prev;
  const double pv = state.psi_v0;

  auto fr = [&] { return ratio(pv, p.psi_v0); };
  auto cd = [&] { return ratio(pv, p.psi_d0); };
  auto dy = [&] { return ratio(-pv, p.psi_d_at_t - p.psi_d0); };
  auto cross = [&] {
    if (!state.psi_cross) throw std::invalid_argument("beta variant needs psi_cross");
    return -pv + *state.psi_cross;
  };
  auto prp = [&] { return ratio(cross(), -p.psi_v0); };
  auto ls = [&] { return ratio(cross(), -p.psi_d0); };
  auto hs = [&] { return ratio(cross(), p.psi_d_at_t - p.psi_d0); };

  switch (kind) {
    case BetaKind::kFR: return fr();
    case BetaKind::kCD: return cd();
    case BetaKind::kDY: return dy();
    case BetaKind::kPRP: return prp();
    case BetaKind::kLS: return ls();
    case BetaKind::kHS: return hs();
    case BetaKind::kHybridPrpFr: return hybrid(fr(), prp());
    case BetaKind::kHybridLsCd: return hybrid(ls(), cd());
    case BetaKind::kHybridHsDy: return hybrid(hs(), dy());
    case BetaKind::kZero: return 0.0;
  }
  return std::nullopt;
}

bool descent_interval_check(const SearchState& state, double beta) {
  if (!state.prev) throw std::invalid_argument("descent_interval_check needs the previous step");
  if (beta < 0.0) return false;
  const double at_t = state.prev->psi_d_at_t;
  if (at_t <= 0.0) return true;
  return beta < -state.psi_v0 / at_t;
}

std::vector<double> zoutendijk_monitor(const RunReport& report) {
  if (report.trajectory.empty()) {
    throw std::invalid_argument("zoutendijk_monitor needs at least one iteration");
  }
  std::vector<double> sums;
  sums.reserve(report.trajectory.size());
  double total = 0.0;
  for (const auto& it : report.trajectory) {
    total += it.psi_d0 * it.psi_d0 / (it.norm_d * it.norm_d);
    sums.push_back(total);
  }
  return sums;
}

RunReport nvrcg_run(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x0,
                    const SolverOptions& opts) {
  opts.wolfe.validate();
  if (opts.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (is_raw_beta(opts.kind) && !opts.allow_raw_beta) {
    throw std::invalid_argument(fmt::format(
        "raw {} beta has no convergence guarantee; enable allow_raw_beta to use it",
        to_string(opts.kind)));
  }
  const Manifold& mf = obj.manifold();
  const ManifoldPoint start = mf.point(x0.coords, Validation::kStrict);

  RunReport report;
  SearchState state;
  state.x = start;
  state.F_x = obj.eval(state.x);
  std::optional<TangentVector> transported_d;  // T^{k-1}(d_{k-1}) at x_k
  double min_norm_v = std::numeric_limits<double>::infinity();
  double last_norm_v = 0.0;

  try {
    for (state.k = 0;; ++state.k) {
      const SteepestDescentResult sd = steepest_direction(cone, obj, state.x, opts.subproblem);
      state.v = sd.v;
      state.theta = sd.theta;
      state.psi_v0 = sd.phi_dfv;
      const double norm_v = mf.norm(sd.v);
      last_norm_v = norm_v;
      min_norm_v = std::min(min_norm_v, norm_v);

      if (norm_v <= opts.criticality_tol) {
        report.termination = Termination::kCritical;
        break;
      }
      {
        const double half_sq = 0.5 * norm_v * norm_v;
        Checker pre(opts.assert_level, state, 0.0, false);
        pre.require(AssertLevel::kDescent,
                    state.psi_v0 < -half_sq + slack(state.psi_v0, half_sq) && state.psi_v0 < 0.0,
                    "phi(DF(x) v) < -|v|^2/2 < 0");
        pre.require(AssertLevel::kFull,
                    std::abs(state.theta - (state.psi_v0 + half_sq)) <= slack(state.theta, half_sq),
                    "theta = psi_v0 + |v|^2/2");
      }
      if (state.k >= opts.max_iter) {
        report.termination = Termination::kMaxIter;
        break;
      }

      // Search direction.
      double beta = 0.0;
      bool restarted = false;
      state.psi_cross.reset();
      if (state.k == 0 || opts.kind == BetaKind::kZero) {
        state.d = state.v;
        state.psi_d0 = state.psi_v0;
      } else {
        if (needs_cross_term(opts.kind)) {
          state.psi_cross = cross_term(cone, obj, *state.prev, state.v, opts.cross_reading);
        }
        const std::optional<double> b = compute_beta(opts.kind, state);
        if (b && std::isfinite(*b)) {
          beta = *b;
          state.d = state.v + beta * (*transported_d);
          state.psi_d0 = phi(cone, obj.jacobian_action(state.x, state.d));
        }
        if (!b || !std::isfinite(*b) || !(state.psi_d0 < 0.0)) {
          restarted = true;
          beta = 0.0;
          state.d = state.v;
          state.psi_d0 = state.psi_v0;
          ++report.restarts;
        }
      }

      const Checker check(opts.assert_level, state, beta, restarted);
      check.require(AssertLevel::kDescent, state.psi_d0 < 0.0, "psi_{x_k,d_k}(0) < 0");
      if (state.prev && !restarted && beta >= 0.0) {
        const double rhs = state.psi_v0 + beta * state.prev->psi_d_at_t;
        check.require(AssertLevel::kFull, state.psi_d0 <= rhs + slack(state.psi_d0, rhs),
                      "psi_{x_k,d_k}(0) <= psi_{x_k,v_k}(0) + beta_k psi_{x_{k-1},d_{k-1}}(t d)");
      }
      if (uses_cd_bound(opts.kind) && opts.wolfe.strong) {
        const double rhs = (1.0 - opts.wolfe.c2) * state.psi_v0;
        check.require(AssertLevel::kFull, state.psi_d0 <= rhs + slack(state.psi_d0, rhs),
                      "CD bound psi_{x_k,d_k}(0) <= (1 - c2) psi_{x_k,v_k}(0)");
      }
      if (uses_dy_bound(opts.kind)) {
        check.require(AssertLevel::kFull, state.psi_d0 <= 0.0, "DY: psi_{x_k,d_k}(0) <= 0");
      }
      if (opts.kind == BetaKind::kDY && state.prev && !restarted && state.prev->psi_d0 < 0.0) {
        // beta <= psi_d0 / prev.psi_d0 with prev.psi_d0 < 0, multiplied out.
        const double lhs = beta * state.prev->psi_d0;
        check.require(AssertLevel::kFull, state.psi_d0 <= lhs + slack(state.psi_d0, lhs),
                      "DY bound beta_k <= psi_{x_k,d_k}(0) / psi_{x_{k-1},d_{k-1}}(0)");
      }

      const LineSearchOutcome ls = wolfe_search(cone, obj, state.x, state.d, opts.wolfe);

      IterationSummary summary;
      summary.k = state.k;
      summary.F_x = state.F_x;
      summary.norm_v = norm_v;
      summary.norm_d = mf.norm(state.d);
      summary.theta = state.theta;
      summary.psi_v0 = state.psi_v0;
      summary.psi_d0 = state.psi_d0;
      summary.beta = beta;
      summary.restarted = restarted;
      summary.t = ls.t;
      summary.psi_d_at_t = ls.psi_at_t;
      summary.line_search_evals = ls.evals;
      summary.line_search_status = ls.status;
      if (opts.trace_points) {
        summary.x = state.x.coords;
        summary.v = state.v.components;
        summary.d = state.d.components;
      }
      report.trajectory.push_back(std::move(summary));

      if (ls.status != LineSearchStatus::kAccepted) {
        report.termination = Termination::kStepStagnated;
        break;
      }
      if (opts.assert_level == AssertLevel::kFull) {
        check.require(AssertLevel::kFull,
                      check_armijo(cone, obj, state.x, state.d, ls.t, opts.wolfe.c1, state.F_x,
                                   state.psi_d0),
                      "accepted step fails the Armijo condition");
        check.require(AssertLevel::kFull,
                      check_curvature(cone, obj, state.x, state.d, ls.t, opts.wolfe.c2,
                                      state.psi_d0, opts.wolfe.strong),
                      "accepted step fails the curvature condition");
      }
      if (uses_dy_bound(opts.kind)) {
        check.require(AssertLevel::kFull,
                      state.psi_d0 <= ls.psi_at_t + slack(state.psi_d0, ls.psi_at_t),
                      "DY: psi_{x_k,d_k}(0) <= psi_{x_k,d_k}(t_k d_k)");
      }

      const TangentVector step = ls.t * state.d;
      transported_d = mf.transport_diff_retraction(state.x, step, state.d);
      state.prev = PreviousStep{state.x,      state.d,      ls.t,
                                state.psi_v0, state.psi_d0, ls.psi_at_t};
      state.x = ls.x_new;
      state.F_x = ls.F_new;
      ++report.iterations;

      if (ls.t <= opts.wolfe.t_min) {
        const SteepestDescentResult last = steepest_direction(cone, obj, state.x, opts.subproblem);
        last_norm_v = mf.norm(last.v);
        min_norm_v = std::min(min_norm_v, last_norm_v);
        report.termination = last_norm_v <= opts.criticality_tol ? Termination::kCritical
                                                                 : Termination::kStepStagnated;
        break;
      }
    }
  } catch (const DegenerateRetraction&) {
    report.termination = Termination::kDegenerate;
  }

  report.final_x = state.x.coords;
  report.final_F = state.F_x;
  report.final_norm_v = last_norm_v;
  report.min_norm_v = min_norm_v;
  if (!report.trajectory.empty()) report.zoutendijk_partial_sums = zoutendijk_monitor(report);
  return report;
}

}  // namespace nvrcg
