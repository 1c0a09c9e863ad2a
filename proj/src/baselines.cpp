#include "bpiree/baselines.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bpiree/errors.hpp"
#include "bpiree/lp.hpp"
#include "bpiree/prox.hpp"
#include "detail.hpp"

namespace bpiree {

using detail::gather;
using detail::scatter;

namespace {

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

Eigen::VectorXd initial_eps(const Problem& problem, const SolverConfig& config) {
  if (problem.penalty().kind() != PenaltyKind::SmoothedLp) return {};
  return Eigen::VectorXd::Constant(problem.dim(), config.eps0);
}

void require_abs(const Problem& problem, const char* method) {
  if (!problem.penalty().g().is_abs()) {
    throw UnsupportedOperation(std::string(method) + " requires g = |.|");
  }
}

// Updates the loop state after an accepted iterate; returns true on convergence.
struct LoopState {
  Eigen::VectorXd x;
  Eigen::VectorXd eps;
  double F;
  std::int64_t k = 0;
};

bool accept(LoopState& st, Eigen::VectorXd x_new, Eigen::VectorXd eps_new, double F_new,
            double beta, const SolverConfig& config, detail::RunMonitor& monitor,
            SolveResult& result) {
  const double step = (x_new - st.x).norm();
  const double step_rel = detail::relative_step(step, st.x.norm());
  st.x = std::move(x_new);
  st.eps = std::move(eps_new);
  st.F = F_new;
  st.k += 1;
  result.last_step_rel = step_rel;
  monitor.end_iteration(st.k, st.x, st.eps, st.F, step_rel, beta, -1, false);
  return step == 0.0 || step_rel < config.tol;
}

void check_finite(const Eigen::VectorXd& x, double F, std::int64_t k) {
  if (!std::isfinite(F) || !x.allFinite()) {
    throw NumericalFailure("non-finite iterate or objective at iteration " + std::to_string(k), k,
                           -1, F);
  }
}

SolveResult finish(LoopState& st, SolveResult& result, detail::RunMonitor& monitor,
                   double passes_per_iteration) {
  result.iterations = st.k;
  result.passes = static_cast<double>(st.k) * passes_per_iteration;
  result.F = st.F;
  result.x = std::move(st.x);
  result.eps = std::move(st.eps);
  monitor.finish(result);
  return std::move(result);
}

SolveResult reweighted_full_vector(const Problem& problem, const SolverConfig& config,
                                   const Eigen::VectorXd& x0, const Observer& observer,
                                   bool extrapolation) {
  config.validate(1);
  const PenaltySpec& penalty = problem.penalty();
  const bool lp = penalty.kind() == PenaltyKind::SmoothedLp;
  const Index n = problem.dim();
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  const double alpha = 1.0 / problem.loss().block_lipschitz(all);

  SolveResult result;
  detail::RunMonitor monitor(problem, config, observer);
  LoopState st{x0, initial_eps(problem, config), 0.0};
  if (st.x.size() != n) throw std::invalid_argument("x0 has the wrong dimension");
  st.F = problem.objective(st.x, as_span(st.eps));
  Eigen::VectorXd x_prev = st.x;
  MomentumClock clock;
  clock.restart_period = config.fista_restart;

  result.status = SolveStatus::MaxIter;
  try {
    while (st.k < config.max_iter) {
      monitor.begin_iteration();
      double beta = 0.0;
      if (extrapolation && config.momentum != MomentumRule::None) beta = advance(clock);
      const Eigen::VectorXd y = extrapolate(st.x, x_prev, beta);
      const Eigen::VectorXd grad = problem.loss().gradient(y);
      const Eigen::VectorXd w = penalty_weights(penalty, st.x, as_span(st.eps));
      Eigen::VectorXd x_new = block_prox_step(y, grad, alpha, w, penalty.g());
      Eigen::VectorXd eps_new = lp ? update_epsilon(x_new, st.eps, config.mu) : st.eps;
      const double F_new = problem.objective(x_new, as_span(eps_new));
      check_finite(x_new, F_new, st.k + 1);
      x_prev = st.x;
      if (accept(st, std::move(x_new), std::move(eps_new), F_new, beta, config, monitor,
                 result)) {
        result.status = SolveStatus::Converged;
        break;
      }
    }
  } catch (const NumericalFailure& e) {
    result.status = SolveStatus::NumericalFailure;
    result.message = e.what();
  }
  return finish(st, result, monitor, 1.0);
}

SolveResult block_sweeps(const Problem& problem, const SolverConfig& config,
                         const Eigen::VectorXd& x0, const Observer& observer, bool jacobi) {
  const Index m = problem.num_blocks();
  config.validate(m);
  const PenaltySpec& penalty = problem.penalty();
  const bool lp = penalty.kind() == PenaltyKind::SmoothedLp;
  std::vector<double> block_L;
  for (Index i = 0; i < m; ++i) block_L.push_back(problem.block_lipschitz(i));

  SolveResult result;
  detail::RunMonitor monitor(problem, config, observer);
  LoopState st{x0, initial_eps(problem, config), 0.0};
  if (st.x.size() != problem.dim()) throw std::invalid_argument("x0 has the wrong dimension");
  st.F = problem.objective(st.x, as_span(st.eps));

  result.status = SolveStatus::MaxIter;
  try {
    while (st.k < config.max_iter) {
      monitor.begin_iteration();
      Eigen::VectorXd x_new = st.x;
      Eigen::VectorXd eps_new = st.eps;
      Eigen::VectorXd grad_base;
      Eigen::VectorXd w_base;
      if (jacobi) {
        grad_base = problem.loss().gradient(st.x);
        w_base = penalty_weights(penalty, st.x, as_span(st.eps));
      }
      for (Index i = 0; i < m; ++i) {
        const auto block = problem.partition().block(i);
        const double alpha = 1.0 / block_L[static_cast<std::size_t>(i)];
        Eigen::VectorXd nb;
        if (jacobi) {
          nb = block_prox_step(gather(st.x, block), gather(grad_base, block), alpha,
                               gather(w_base, block), penalty.g());
        } else {
          const Eigen::VectorXd grad = problem.loss().block_gradient(x_new, block);
          const Eigen::VectorXd w = penalty_weights(penalty, x_new, block, as_span(eps_new));
          nb = block_prox_step(gather(x_new, block), grad, alpha, w, penalty.g());
        }
        scatter(x_new, block, nb);
        if (lp) scatter(eps_new, block, update_epsilon(nb, gather(eps_new, block), config.mu));
      }
      const double F_new = problem.objective(x_new, as_span(eps_new));
      check_finite(x_new, F_new, st.k + 1);
      if (accept(st, std::move(x_new), std::move(eps_new), F_new, 0.0, config, monitor, result)) {
        result.status = SolveStatus::Converged;
        break;
      }
    }
  } catch (const NumericalFailure& e) {
    result.status = SolveStatus::NumericalFailure;
    result.message = e.what();
  }
  return finish(st, result, monitor, 1.0);
}

}  // namespace

SolveResult pire_solve(const Problem& problem, const SolverConfig& config,
                       const Eigen::VectorXd& x0, const Observer& observer) {
  return reweighted_full_vector(problem, config, x0, observer, false);
}

SolveResult pire_ps_solve(const Problem& problem, const SolverConfig& config,
                          const Eigen::VectorXd& x0, const Observer& observer) {
  return block_sweeps(problem, config, x0, observer, true);
}

SolveResult pire_au_solve(const Problem& problem, const SolverConfig& config,
                          const Eigen::VectorXd& x0, const Observer& observer) {
  return block_sweeps(problem, config, x0, observer, false);
}

SolveResult irl1_solve(const Problem& problem, const SolverConfig& config,
                       const Eigen::VectorXd& x0, const Observer& observer) {
  require_abs(problem, "irl1");
  return reweighted_full_vector(problem, config, x0, observer, false);
}

SolveResult irl1e1_solve(const Problem& problem, const SolverConfig& config,
                         const Eigen::VectorXd& x0, const Observer& observer) {
  require_abs(problem, "irl1e1");
  return reweighted_full_vector(problem, config, x0, observer, true);
}

}  // namespace bpiree
