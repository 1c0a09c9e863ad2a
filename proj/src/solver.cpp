#include "bpiree/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bpiree/errors.hpp"
#include "bpiree/lp.hpp"
#include "bpiree/prox.hpp"
#include "detail.hpp"

namespace bpiree {

using detail::gather;
using detail::scatter;

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "Converged";
    case SolveStatus::MaxIter:
      return "MaxIter";
    case SolveStatus::NumericalFailure:
      return "NumericalFailure";
  }
  return "Unknown";
}

void SolverConfig::validate(Index num_blocks) const {
  auto fail = [](const std::string& field, const std::string& rule) {
    throw std::invalid_argument("solver." + field + " " + rule);
  };
  if (!(gamma > 1.0) || !std::isfinite(gamma)) fail("gamma", "must be > 1");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta", "must lie in (0, 1)");
  if (!(mu > 0.0 && mu < 1.0)) fail("mu", "must lie in (0, 1)");
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) fail("eps0", "must be > 0");
  if (max_iter < 1) fail("max_iter", "must be >= 1");
  if (!(tol > 0.0)) fail("tol", "must be > 0");
  if (fista_restart < 1) fail("fista_restart", "must be >= 1");
  if (support_window < 1) fail("support_window", "must be >= 1");
  if (T != 0 && num_blocks > 0 && T < schedule.window_length(num_blocks)) {
    fail("T", "must be at least the schedule window (" +
                  std::to_string(schedule.window_length(num_blocks)) + ")");
  }
}

double extrapolation_bound(double L_prev, double L_curr, double gamma, double delta) {
  if (!(L_prev > 0.0) || !(L_curr > 0.0)) {
    throw std::invalid_argument("extrapolation_bound: Lipschitz constants must be positive");
  }
  return delta * (gamma - 1.0) / (2.0 * (gamma + 1.0)) * std::sqrt(L_prev / L_curr);
}

Eigen::VectorXd extrapolate(const Eigen::VectorXd& x_curr, const Eigen::VectorXd& x_prev,
                            double beta) {
  if (x_curr.size() != x_prev.size()) throw std::invalid_argument("extrapolate: length mismatch");
  if (beta == 0.0) return x_curr;
  return x_curr + beta * (x_curr - x_prev);
}

SolverState init_state(const Problem& problem, const SolverConfig& config, Eigen::VectorXd x0) {
  const Index n = problem.dim();
  const Index m = problem.num_blocks();
  if (x0.size() != n) {
    throw std::invalid_argument("x0 has dimension " + std::to_string(x0.size()) +
                                ", problem has " + std::to_string(n));
  }
  if (!x0.allFinite()) throw std::invalid_argument("x0 must be finite");

  SolverState s;
  s.x = std::move(x0);
  s.prev_block_values.reserve(static_cast<std::size_t>(m));
  s.block_L.reserve(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) {
    s.prev_block_values.push_back(gather(s.x, problem.partition().block(i)));
    s.block_L.push_back(problem.block_lipschitz(i));
  }
  s.update_counts.assign(static_cast<std::size_t>(m), 0);
  s.last_block_L = s.block_L;
  MomentumClock clock;
  clock.restart_period = config.fista_restart;
  s.clocks.assign(static_cast<std::size_t>(m), clock);

  std::span<const double> eps;
  if (problem.penalty().kind() == PenaltyKind::SmoothedLp) {
    s.eps = Eigen::VectorXd::Constant(n, config.eps0);
    eps = {s.eps.data(), static_cast<std::size_t>(n)};
  }
  s.weights = penalty_weights(problem.penalty(), s.x, eps);
  s.F = problem.objective(s.x, eps);
  if (!std::isfinite(s.F)) throw NumericalFailure("objective at x0 is not finite", 0, -1, s.F);
  return s;
}

namespace {

struct Attempt {
  Eigen::VectorXd x;
  Eigen::VectorXd eps;
  Eigen::VectorXd block_value;
  double F;
};

}  // namespace

StepInfo bpiree_step(SolverState& s, const Problem& problem, const SolverConfig& config) {
  const PenaltySpec& penalty = problem.penalty();
  const bool lp = penalty.kind() == PenaltyKind::SmoothedLp;
  const std::int64_t k = s.k + 1;
  const Index i = choose_block(config.schedule, k, problem.num_blocks());
  const auto bi = static_cast<std::size_t>(i);
  const auto block = problem.partition().block(i);

  const double L = s.block_L[bi];
  const double alpha = 1.0 / (config.gamma * L);
  const double L_prev = s.update_counts[bi] == 0 ? L : s.last_block_L[bi];
  const double bound = extrapolation_bound(L_prev, L, config.gamma, config.delta);

  double beta = 0.0;
  switch (config.momentum) {
    case MomentumRule::Fista:
      beta = std::min(bound, advance(s.clocks[bi]));
      break;
    case MomentumRule::Bound:
      beta = bound;
      break;
    case MomentumRule::FistaUncapped:
      beta = advance(s.clocks[bi]);
      break;
    case MomentumRule::None:
      break;
  }
  // x̃^{j−2} only carries history from the third update of a block on.
  if (s.update_counts[bi] < 2) beta = 0.0;

  const Eigen::VectorXd x_block = gather(s.x, block);
  const Eigen::VectorXd& x_prev_block = s.prev_block_values[bi];
  const Eigen::VectorXd eps_block = lp ? gather(s.eps, block) : Eigen::VectorXd();
  const Eigen::VectorXd w =
      lp ? lp_weights(x_block, eps_block, penalty.lambda(), penalty.p())
         : penalty_weights(penalty, s.x, block);

  auto attempt = [&](double b) {
    const Eigen::VectorXd x_hat = extrapolate(x_block, x_prev_block, b);
    Eigen::VectorXd y = s.x;
    scatter(y, block, x_hat);
    const Eigen::VectorXd grad = problem.loss().block_gradient(y, block);

    Attempt out;
    out.block_value = block_prox_step(x_hat, grad, alpha, w, penalty.g());
    out.x = s.x;
    scatter(out.x, block, out.block_value);
    std::span<const double> eps;
    if (lp) {
      out.eps = s.eps;
      scatter(out.eps, block, update_epsilon(out.block_value, eps_block, config.mu));
      eps = {out.eps.data(), static_cast<std::size_t>(out.eps.size())};
    }
    out.F = problem.objective(out.x, eps);
    if (!std::isfinite(out.F) || !out.block_value.allFinite()) {
      throw NumericalFailure("non-finite iterate or objective at iteration " + std::to_string(k) +
                                 " (block " + std::to_string(i) + ")",
                             k, i, out.F);
    }
    return out;
  };

  StepInfo info{};
  info.k = k;
  info.block = i;
  info.beta_tried = beta;
  info.F_prev = s.F;
  info.L = L;
  info.L_prev = L_prev;
  info.x_prev_norm = s.x.norm();
  info.prev_step_norm = (x_block - x_prev_block).norm();

  Attempt accepted = attempt(beta);
  if (config.safeguard && beta > 0.0 && accepted.F > s.F) {
    accepted = attempt(0.0);
    beta = 0.0;
    info.retried = true;
  }
  info.beta = beta;
  info.F = accepted.F;
  info.step_norm = (accepted.block_value - x_block).norm();

  s.prev_block_values[bi] = x_block;
  s.x = std::move(accepted.x);
  if (lp) s.eps = std::move(accepted.eps);
  scatter(s.weights, block, w);
  s.update_counts[bi] += 1;
  s.last_block_L[bi] = L;
  s.F = accepted.F;
  s.k = k;
  return info;
}

SolveResult solve(const Problem& problem, const SolverConfig& config, const Eigen::VectorXd& x0,
                  const Observer& observer) {
  const Index m = problem.num_blocks();
  config.validate(m);

  SolveResult result;
  SolverState state = init_state(problem, config, x0);
  detail::RunMonitor monitor(problem, config, observer);

  // Blocks visited without moving since the last nonzero step.
  std::vector<char> idle(static_cast<std::size_t>(m), 0);
  Index idle_count = 0;
  double coordinate_updates = 0.0;
  Eigen::VectorXd cycle_start = state.x;

  result.status = SolveStatus::MaxIter;
  for (std::int64_t it = 0; it < config.max_iter; ++it) {
    monitor.begin_iteration();
    StepInfo info;
    try {
      info = bpiree_step(state, problem, config);
    } catch (const NumericalFailure& e) {
      result.status = SolveStatus::NumericalFailure;
      result.message = e.what();
      break;
    }
    coordinate_updates += static_cast<double>(problem.partition().block(info.block).size());
    if (info.retried) ++result.retries;
    const double step_rel = detail::relative_step(info.step_norm, info.x_prev_norm);
    monitor.end_iteration(info.k, state.x, state.eps, state.F, step_rel, info.beta, info.block,
                          info.retried);

    if (config.stop_rule == StopRule::Cycle) {
      if (info.k % m != 0) continue;
      const double change = (state.x - cycle_start).norm();
      result.last_step_rel = detail::relative_step(change, cycle_start.norm());
      cycle_start = state.x;
      if (change == 0.0 || result.last_step_rel < config.tol) {
        result.status = SolveStatus::Converged;
        break;
      }
      continue;
    }

    result.last_step_rel = step_rel;
    if (info.step_norm > 0.0) {
      std::fill(idle.begin(), idle.end(), 0);
      idle_count = 0;
      if (step_rel < config.tol) {
        result.status = SolveStatus::Converged;
        break;
      }
    } else {
      auto& flag = idle[static_cast<std::size_t>(info.block)];
      if (!flag) {
        flag = 1;
        ++idle_count;
      }
      if (idle_count == m) {
        result.status = SolveStatus::Converged;
        break;
      }
    }
  }

  result.iterations = state.k;
  result.passes = coordinate_updates / static_cast<double>(problem.dim());
  result.F = state.F;
  result.x = std::move(state.x);
  result.eps = std::move(state.eps);
  monitor.finish(result);
  return result;
}

double stationarity_residual(const Problem& problem, const Eigen::VectorXd& x,
                             const Eigen::VectorXd& weights) {
  if (!problem.penalty().g().is_abs()) {
    throw UnsupportedOperation("stationarity_residual is only defined for g = |.|");
  }
  if (weights.size() != x.size()) {
    throw std::invalid_argument("stationarity_residual: weights length mismatch");
  }
  const Eigen::VectorXd grad = problem.loss().gradient(x);
  double sum = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double r = 0.0;
    if (x(j) != 0.0) {
      r = grad(j) + weights(j) * (x(j) > 0.0 ? 1.0 : -1.0);
    } else {
      r = std::max(std::abs(grad(j)) - weights(j), 0.0);
    }
    sum += r * r;
  }
  return std::sqrt(sum);
}

DescentCertificate descent_certificate(double F_prev, double F_next, double L_curr,
                                       double /*L_prev*/, double beta, double step_norm,
                                       double prev_step_norm, double gamma) {
  const double c1 = (gamma - 1.0) / 4.0;
  const double c2 = (gamma + 1.0) * (gamma + 1.0) / (gamma - 1.0);
  const double rhs = c1 * L_curr * step_norm * step_norm -
                     c2 * L_curr * beta * beta * prev_step_norm * prev_step_norm;
  const double slack = (F_prev - F_next) - rhs;
  return {slack >= -1e-9 * (1.0 + std::abs(F_prev)), slack};
}

}  // namespace bpiree
