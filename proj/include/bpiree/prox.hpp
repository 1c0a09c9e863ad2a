#pragma once

#include <Eigen/Core>

#include "bpiree/scalar_convex.hpp"

namespace bpiree {

/// argmin_x τ|x| + ½(x − v)², i.e. sign(v)·max(|v| − τ, 0).
/// τ = +∞ gives 0. Throws std::invalid_argument for τ < 0, NaN τ or
/// non-finite v.
double prox_weighted_abs(double v, double tau);

/// argmin_x τ·g(x) + ½(x − v)² for a generic convex g.
struct ScalarProxProblem {
  double v;
  double tau;
  const ScalarConvex& g;
};

inline constexpr double kDefaultProxTol = 1e-10;

/// Bisection on the monotone inclusion 0 ∈ x − v + τ∂g(x). The result is
/// within `tol` of the minimizer. Throws NumericalFailure when the bracket
/// cannot be established within 64 doublings.
double prox_scalar_convex(const ScalarProxProblem& problem, double tol = kDefaultProxTol);

/// Exact minimizer of ⟨grad, x⟩ + (1/2α)‖x − x̂‖² + Σ_j w_j g(x_j).
///
/// Coordinate-wise prox of g at center x̂_j − α·grad_j with weight α·w_j.
Eigen::VectorXd block_prox_step(const Eigen::VectorXd& x_hat, const Eigen::VectorXd& grad,
                                double alpha, const Eigen::VectorXd& weights,
                                const ScalarConvex& g);

}  // namespace bpiree
