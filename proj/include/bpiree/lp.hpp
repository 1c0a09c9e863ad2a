#pragma once

#include <Eigen/Core>

#include "bpiree/solver.hpp"

namespace bpiree {

/// w_j = λ·p·(|x_j| + ε_j²)^{p−1}. Once ε_j² underflows to 0 the weight of
/// a zero coordinate is +∞, which pins it at zero in the prox.
/// Throws std::invalid_argument if any ε_j ≤ 0 or p ∉ (0, 1).
Eigen::VectorXd lp_weights(const Eigen::VectorXd& x_block, const Eigen::VectorXd& eps_block,
                           double lambda, double p);

/// ε_j unchanged where x_new_j == 0, ε_j·√μ otherwise (never below the
/// smallest positive double). Zero detection is exact: the |·| prox returns
/// exact zeros.
Eigen::VectorXd update_epsilon(const Eigen::VectorXd& x_new_block,
                               const Eigen::VectorXd& eps_block, double mu);

/// BPIREe on λΣ(|x_j| + ε_j²)^p with the smoothing update after every
/// accepted step. The result carries the final ε and a support report over
/// `config.support_window` iterations. Requires a SmoothedLp penalty.
SolveResult solve_lp(const Problem& problem, const SolverConfig& config,
                     const Eigen::VectorXd& x0, const Observer& observer = {});

}  // namespace bpiree
