#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpiree/momentum.hpp"
#include "bpiree/objective.hpp"
#include "bpiree/schedule.hpp"
#include "bpiree/support.hpp"

namespace bpiree {

/// Where the candidate momentum comes from before it is capped by
/// extrapolation_bound().
enum class MomentumRule {
  Fista,          // per-block FISTA sequence with fixed restart
  Bound,          // always the maximal admissible value
  None,           // no extrapolation
  FistaUncapped,  // FISTA sequence without the cap; only the safeguard keeps F monotone
};

/// What the relative-step stopping test compares.
enum class StopRule {
  Cycle,      // x^k against x^{k−m} at the end of every cycle of m iterations
  Iteration,  // x^k against x^{k−1} on iterations that moved their block
};

struct SolverConfig {
  double gamma = 2.0;  // α = 1/(γL), γ > 1
  double delta = 0.9;  // momentum safety factor in (0, 1)
  Schedule schedule;
  std::int64_t T = 0;  // essentially-cyclic window; 0 means the schedule's own window
  std::int64_t max_iter = 100000;
  double tol = 1e-4;
  bool safeguard = true;
  std::int64_t fista_restart = 200;
  double mu = 0.1;    // smoothing decay, smoothed lp only
  double eps0 = 1.0;  // initial smoothing factor, smoothed lp only
  MomentumRule momentum = MomentumRule::Fista;
  StopRule stop_rule = StopRule::Cycle;
  bool record_trace = false;
  bool record_timing = false;  // wall_ns stays 0 otherwise, keeping traces reproducible
  Index support_window = 100;

  /// Throws std::invalid_argument naming the offending field.
  void validate(Index num_blocks) const;

  bool operator==(const SolverConfig&) const = default;
};

struct LpTraceFields {
  double eps_min;
  double eps_max;
  Index support_size;
  bool sign_fixed;
};

struct TraceRecord {
  std::int64_t k;
  double F;
  double step_rel;  // ‖x^k − x^{k−1}‖ / max(‖x^{k−1}‖, 1e-12)
  double residual;  // dist(0, ∂F(x^k)); NaN when g is not |·|
  double beta;
  Index block;  // −1 for full-vector methods
  bool retried;
  std::int64_t wall_ns;
  std::optional<LpTraceFields> lp;
};

struct SolverState {
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> prev_block_values;  // block value before its last update
  std::vector<std::int64_t> update_counts;         // d^k per block; sums to k
  std::vector<double> last_block_L;                // L used at each block's last update
  std::vector<double> block_L;                     // cached Lipschitz estimates
  std::vector<MomentumClock> clocks;               // one FISTA clock per block
  Eigen::VectorXd weights;                         // weights last used per coordinate
  Eigen::VectorXd eps;                             // smoothed lp only, else empty
  double F = 0.0;
  std::int64_t k = 0;
};

/// What one accepted iteration did; enough to evaluate descent_certificate().
struct StepInfo {
  std::int64_t k;
  Index block;
  double beta;        // momentum of the accepted attempt
  double beta_tried;  // momentum of the first attempt
  bool retried;
  double F_prev;
  double F;
  double L;
  double L_prev;
  double step_norm;       // ‖x̃^j − x̃^{j−1}‖ on the block
  double prev_step_norm;  // ‖x̃^{j−1} − x̃^{j−2}‖ on the block
  double x_prev_norm;     // ‖x^{k−1}‖
};

enum class SolveStatus { Converged, MaxIter, NumericalFailure };

std::string to_string(SolveStatus status);

struct SolveResult {
  Eigen::VectorXd x;
  Eigen::VectorXd eps;  // smoothed lp only
  std::vector<TraceRecord> trace;
  SolveStatus status = SolveStatus::MaxIter;
  std::int64_t iterations = 0;
  double passes = 0.0;  // coordinate updates divided by n
  double F = 0.0;
  double last_step_rel = 0.0;
  std::int64_t retries = 0;
  std::optional<SupportReport> support;
  std::string message;
};

struct IterationView {
  std::int64_t k;
  const Eigen::VectorXd& x;
  const Eigen::VectorXd& eps;
  double F;
};

using Observer = std::function<void(const IterationView&)>;

/// δ(γ − 1)/(2(γ + 1))·√(L_prev/L_curr); equals (δ/6)√(L_prev/L_curr) at γ = 2.
double extrapolation_bound(double L_prev, double L_curr, double gamma, double delta);

/// x_curr + β(x_curr − x_prev).
Eigen::VectorXd extrapolate(const Eigen::VectorXd& x_curr, const Eigen::VectorXd& x_prev,
                            double beta);

/// Fresh state at x0: x^{−1} = x^0, zero update counts, cached block
/// Lipschitz estimates, ε = eps0 for smoothed lp.
SolverState init_state(const Problem& problem, const SolverConfig& config, Eigen::VectorXd x0);

/// One BPIREe iteration, updating `state` in place.
///
/// Picks the block, extrapolates with β = min(bound, schedule value) (β = 0
/// for each block's first two updates), solves the reweighted block
/// subproblem at the extrapolated point, and, with the safeguard on, redoes
/// the iteration once with β = 0 if the objective went up. For smoothed lp
/// the weights come from lp_weights() and ε of the updated block decays
/// via update_epsilon().
///
/// Throws NumericalFailure when the new objective or iterate is not finite.
StepInfo bpiree_step(SolverState& state, const Problem& problem, const SolverConfig& config);

/// Runs bpiree_step() until the relative step ‖Δx‖ / max(‖x‖, 1e-12) drops
/// below tol, the iterate is a fixed point, or max_iter is reached.
///
/// With StopRule::Cycle (default) Δx spans the last m iterations and is
/// checked whenever k is a multiple of m; both schedules update every block
/// exactly once in such a cycle. A cycle without any change is a fixed
/// point. With StopRule::Iteration Δx is the last iteration's step, checked
/// only on iterations that moved their block; m consecutive idle iterations
/// count as a fixed point. For m = 1 both rules coincide.
///
/// Numerical failures end the run with status NumericalFailure.
///
/// Works for every penalty variant; smoothed lp problems additionally get
/// ε tracking and a support report (see solve_lp()).
SolveResult solve(const Problem& problem, const SolverConfig& config, const Eigen::VectorXd& x0,
                  const Observer& observer = {});

/// Exact dist(0, ∂F(x)) for a |·| penalty given w_j = λh′(|x_j|) at x:
/// r_j = ∇_j f + w_j·sign(x_j) off zero, max(|∇_j f| − w_j, 0) at zero.
/// Throws UnsupportedOperation when g is not |·|.
double stationarity_residual(const Problem& problem, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& weights);

struct DescentCertificate {
  bool holds;
  double slack;  // (F_prev − F_next) − rhs
};

/// Checks F_prev − F_next ≥ c₁·L·‖Δ‖² − c₂·L·β²·‖Δ_prev‖² with
/// c₁ = (γ − 1)/4 and c₂ = (γ + 1)²/(γ − 1), up to an absolute slack of
/// 1e-9·(1 + |F_prev|). `L_prev` is accepted for symmetry with the
/// bound-based form but does not enter this inequality.
DescentCertificate descent_certificate(double F_prev, double F_next, double L_curr, double L_prev,
                                       double beta, double step_norm, double prev_step_norm,
                                       double gamma);

inline DescentCertificate descent_certificate(const StepInfo& step, double gamma) {
  return descent_certificate(step.F_prev, step.F, step.L, step.L_prev, step.beta, step.step_norm,
                             step.prev_step_norm, gamma);
}

}  // namespace bpiree
