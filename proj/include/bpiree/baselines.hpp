#pragma once

#include <Eigen/Core>

#include "bpiree/solver.hpp"

namespace bpiree {

// Comparison methods. All share SolverConfig for max_iter, tol, record_trace,
// fista_restart and the smoothing parameters; none of them extrapolates
// except irl1e1. On smoothed lp problems every method applies the same ε
// decay as BPIREe to the coordinates it updates, so all of them minimise
// the same model.

/// Full-vector proximal reweighted step with α = 1/L, L the global estimate.
SolveResult pire_solve(const Problem& problem, const SolverConfig& config,
                       const Eigen::VectorXd& x0, const Observer& observer = {});

/// Parallel splitting: every block of a sweep steps from the same base point
/// with weights frozen at the sweep start (block Jacobi), α_i = 1/L_i.
/// One iteration is one sweep.
SolveResult pire_ps_solve(const Problem& problem, const SolverConfig& config,
                          const Eigen::VectorXd& x0, const Observer& observer = {});

/// Alternating updates: blocks in order within a sweep, each from the
/// freshest iterate with freshly computed weights (block Gauss–Seidel).
SolveResult pire_au_solve(const Problem& problem, const SolverConfig& config,
                          const Eigen::VectorXd& x0, const Observer& observer = {});

/// Iteratively reweighted ℓ1: PIRE restricted to g = |·|.
SolveResult irl1_solve(const Problem& problem, const SolverConfig& config,
                       const Eigen::VectorXd& x0, const Observer& observer = {});

/// IRL1 with FISTA extrapolation x̂ = x^k + β(x^k − x^{k−1}) on the full
/// vector and no safeguard. MomentumRule::None forces β ≡ 0.
SolveResult irl1e1_solve(const Problem& problem, const SolverConfig& config,
                         const Eigen::VectorXd& x0, const Observer& observer = {});

}  // namespace bpiree
