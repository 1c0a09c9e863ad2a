#pragma once

#include <Eigen/Core>

namespace bpiree {

struct PowerIterationResult {
  double value;  // estimate of ||M||_2^2
  int iterations;
  bool converged;
};

/// Largest eigenvalue of MᵀM by power iteration.
///
/// Stops when successive Rayleigh quotients agree to `tol` relative, or after
/// `max_iter` products. The start vector is deterministic.
PowerIterationResult squared_spectral_norm(const Eigen::MatrixXd& M, double tol = 1e-8,
                                           int max_iter = 500);

/// Safety factor and floor applied on top of the power-iteration estimate.
inline constexpr double kLipschitzSafety = 1.01;
inline constexpr double kLipschitzFloor = 1e-12;

/// kLipschitzSafety * ||M||_2^2, floored at kLipschitzFloor.
double lipschitz_from_columns(const Eigen::MatrixXd& M);

}  // namespace bpiree
