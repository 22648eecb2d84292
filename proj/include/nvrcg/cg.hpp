#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nvrcg/descent_direction.hpp"
#include "nvrcg/line_search.hpp"

namespace nvrcg {

/// Choice of the conjugacy parameter. kZero gives steepest descent.
enum class BetaKind {
  kFR,
  kCD,
  kDY,
  kPRP,
  kLS,
  kHS,
  kHybridPrpFr,
  kHybridLsCd,
  kHybridHsDy,
  kZero,
};

/// Table names: "FR", "CD", "DY", "PRP", "LS", "HS", "PRP-FR", "LS-CD",
/// "HS-DY", "SD". Parsing also accepts "ZERO" for kZero.
std::string_view to_string(BetaKind kind);
BetaKind parse_beta_kind(std::string_view name);

/// Raw PRP/LS/HS carry no convergence guarantee and need an explicit opt-in.
bool is_raw_beta(BetaKind kind);
/// True for the kinds whose beta uses the psi_{., T(v_k)}(0) cross term.
bool needs_cross_term(BetaKind kind);

/// Where the psi term on the transported v_k is evaluated in PRP/LS/HS.
enum class CrossTermReading {
  /// phi(<T^{k-1} grad f_i(x_{k-1}), v_k>_i): previous gradients moved to x_k.
  kAtCurrent,
  /// phi(DF(x_{k-1})[P v_k]) with P the projection onto T_{x_{k-1}} M.
  kAtPrevious,
};

enum class AssertLevel { kOff, kDescent, kFull };

struct PreviousStep {
  ManifoldPoint x;
  TangentVector d;
  double t = 0.0;
  double psi_v0 = 0.0;      ///< psi_{x_{k-1}, v_{k-1}}(0)
  double psi_d0 = 0.0;      ///< psi_{x_{k-1}, d_{k-1}}(0)
  double psi_d_at_t = 0.0;  ///< psi_{x_{k-1}, d_{k-1}}(t_{k-1} d_{k-1})
};

/// Quantities of iteration k needed to form d_k.
struct SearchState {
  int k = 0;
  ManifoldPoint x;
  Vector F_x;
  TangentVector v;
  double theta = 0.0;
  TangentVector d;
  double psi_v0 = 0.0;
  double psi_d0 = 0.0;
  std::optional<PreviousStep> prev;
  /// psi_{., T^{k-1}(v_k)}(0) under the selected reading (PRP/LS/HS only).
  std::optional<double> psi_cross;
};

/// Evaluates beta_k. Returns nullopt when a denominator falls below 1e-14
/// in magnitude (the caller restarts with beta = 0).
std::optional<double> compute_beta(BetaKind kind, const SearchState& state);

/// Sufficient condition for d_k = v_k + beta T(d_{k-1}) to be K-descent:
/// beta in [0, inf) if psi_prev(t d) <= 0, else [0, -psi_v0 / psi_prev(t d)).
bool descent_interval_check(const SearchState& state, double beta);

enum class Termination { kCritical, kStepStagnated, kMaxIter, kDegenerate };
std::string_view to_string(Termination t);

struct IterationSummary {
  int k = 0;
  Vector F_x;
  double norm_v = 0.0;
  double norm_d = 0.0;
  double theta = 0.0;
  double psi_v0 = 0.0;
  double psi_d0 = 0.0;
  double beta = 0.0;
  bool restarted = false;
  double t = 0.0;
  double psi_d_at_t = 0.0;
  int line_search_evals = 0;
  LineSearchStatus line_search_status = LineSearchStatus::kMaxIter;
  // Filled only with SolverOptions::trace_points.
  Vector x;
  Vector v;
  Vector d;
};

struct RunReport {
  int iterations = 0;
  Termination termination = Termination::kMaxIter;
  std::vector<IterationSummary> trajectory;
  Vector final_x;
  Vector final_F;
  double final_norm_v = 0.0;
  double min_norm_v = 0.0;
  int restarts = 0;
  std::vector<double> zoutendijk_partial_sums;
};

/// S_K = sum_{k <= K} psi_{x_k,d_k}(0)^2 / |d_k|^2 over the trajectory.
std::vector<double> zoutendijk_monitor(const RunReport& report);

struct SolverOptions {
  BetaKind kind = BetaKind::kDY;
  WolfeParams wolfe;
  int max_iter = 10000;
  AssertLevel assert_level = AssertLevel::kOff;
  CrossTermReading cross_reading = CrossTermReading::kAtCurrent;
  bool allow_raw_beta = false;
  bool trace_points = false;
  double criticality_tol = kCriticalityTol;
  SubproblemOptions subproblem;
};

/// Raised by the runtime checks selected with AssertLevel.
class AssertionViolation : public std::runtime_error {
 public:
  AssertionViolation(const std::string& what, std::string state_dump)
      : std::runtime_error(what + "\n" + state_dump), dump(std::move(state_dump)) {}
  std::string dump;
};

/// Nonlinear conjugate gradient for vector optimization on a manifold.
///
/// Each iteration computes v(x_k), stops when |v| <= criticality_tol, forms
/// d_k = v_k + beta_k DR_{x_{k-1}}(t_{k-1} d_{k-1})[d_{k-1}] (restarting with
/// d_k = v_k when beta degenerates or d_k is not K-descent), and moves along
/// the retraction with a Wolfe step. A step of length <= t_min, or a line
/// search that cannot bracket an acceptable step, ends the run.
RunReport nvrcg_run(const ConeSpec& cone, const VectorObjective& obj, const ManifoldPoint& x0,
                    const SolverOptions& opts);

}  // namespace nvrcg
