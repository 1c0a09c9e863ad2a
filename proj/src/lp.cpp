#include "bpiree/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bpiree {

Eigen::VectorXd lp_weights(const Eigen::VectorXd& x_block, const Eigen::VectorXd& eps_block,
                           double lambda, double p) {
  if (x_block.size() != eps_block.size()) throw std::invalid_argument("lp_weights: length mismatch");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("lp_weights: p must lie in (0, 1)");
  Eigen::VectorXd w(x_block.size());
  for (Eigen::Index j = 0; j < x_block.size(); ++j) {
    const double e = eps_block(j);
    if (!(e > 0.0)) throw std::invalid_argument("lp_weights: smoothing factors must be positive");
    w(j) = lambda == 0.0 ? 0.0 : lambda * p * std::pow(std::abs(x_block(j)) + e * e, p - 1.0);
  }
  return w;
}

Eigen::VectorXd update_epsilon(const Eigen::VectorXd& x_new_block,
                               const Eigen::VectorXd& eps_block, double mu) {
  if (x_new_block.size() != eps_block.size()) {
    throw std::invalid_argument("update_epsilon: length mismatch");
  }
  if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("update_epsilon: mu must lie in (0, 1)");
  const double factor = std::sqrt(mu);
  Eigen::VectorXd out = eps_block;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    // Floored at the smallest positive double so that ε stays positive.
    if (x_new_block(j) != 0.0) {
      out(j) = std::max(out(j) * factor, std::numeric_limits<double>::denorm_min());
    }
  }
  return out;
}

SolveResult solve_lp(const Problem& problem, const SolverConfig& config,
                     const Eigen::VectorXd& x0, const Observer& observer) {
  if (problem.penalty().kind() != PenaltyKind::SmoothedLp) {
    throw std::invalid_argument("solve_lp requires a smoothed lp penalty");
  }
  return solve(problem, config, x0, observer);
}

}  // namespace bpiree
