#include "bpiree/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bpiree/errors.hpp"

namespace bpiree {

double prox_weighted_abs(double v, double tau) {
  if (!std::isfinite(v) || std::isnan(tau)) {
    throw std::invalid_argument("prox_weighted_abs: non-finite input");
  }
  if (tau < 0.0) throw std::invalid_argument("prox_weighted_abs: negative weight");
  if (std::isinf(tau)) return 0.0;
  const double shrunk = std::abs(v) - tau;
  if (shrunk <= 0.0) return 0.0;
  return std::copysign(shrunk, v);
}

namespace {

// Sign of the optimality map at x: +1 if every element of x − v + τ∂g(x) is
// positive, −1 if every element is negative, 0 if the set contains zero.
int inclusion_sign(const ScalarProxProblem& p, double x) {
  const Subgradient s = p.g.subgradient(x);
  const double lo = x - p.v + p.tau * s.lo;
  const double hi = x - p.v + p.tau * s.hi;
  if (lo > 0.0) return 1;
  if (hi < 0.0) return -1;
  return 0;
}

}  // namespace

double prox_scalar_convex(const ScalarProxProblem& p, double tol) {
  if (!std::isfinite(p.v) || !std::isfinite(p.tau)) {
    throw std::invalid_argument("prox_scalar_convex: non-finite input");
  }
  if (p.tau < 0.0) throw std::invalid_argument("prox_scalar_convex: negative weight");
  if (!(tol > 0.0)) throw std::invalid_argument("prox_scalar_convex: tol must be positive");
  if (p.tau == 0.0) return p.v;

  const Subgradient at_v = p.g.subgradient(p.v);
  const double G = std::max({std::abs(at_v.lo), std::abs(at_v.hi), 1.0});
  double lo = std::min(p.v, 0.0) - p.tau * G;
  double hi = std::max(p.v, 0.0) + p.tau * G;

  int s_lo = inclusion_sign(p, lo);
  int s_hi = inclusion_sign(p, hi);
  if (s_lo == 0) return lo;
  if (s_hi == 0) return hi;
  for (int doublings = 0; s_lo > 0 || s_hi < 0; ++doublings) {
    if (doublings >= 64) {
      throw NumericalFailure("prox_scalar_convex: could not bracket the minimizer around v=" +
                             std::to_string(p.v));
    }
    const double width = hi - lo;
    if (s_lo > 0) {
      lo -= width;
      s_lo = inclusion_sign(p, lo);
      if (s_lo == 0) return lo;
    }
    if (s_hi < 0) {
      hi += width;
      s_hi = inclusion_sign(p, hi);
      if (s_hi == 0) return hi;
    }
  }

  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const int s = inclusion_sign(p, mid);
    if (s == 0) return mid;
    (s > 0 ? hi : lo) = mid;
  }
  return lo + 0.5 * (hi - lo);
}

Eigen::VectorXd block_prox_step(const Eigen::VectorXd& x_hat, const Eigen::VectorXd& grad,
                                double alpha, const Eigen::VectorXd& weights,
                                const ScalarConvex& g) {
  if (x_hat.size() != grad.size() || x_hat.size() != weights.size()) {
    throw std::invalid_argument("block_prox_step: length mismatch");
  }
  if (!(alpha > 0.0)) throw std::invalid_argument("block_prox_step: alpha must be positive");

  Eigen::VectorXd out(x_hat.size());
  for (Eigen::Index j = 0; j < x_hat.size(); ++j) {
    if (weights(j) < 0.0) throw std::invalid_argument("block_prox_step: negative weight");
    const double center = x_hat(j) - alpha * grad(j);
    const double tau = alpha * weights(j);
    out(j) = g.is_abs() ? prox_weighted_abs(center, tau)
                        : prox_scalar_convex({center, tau, g}, kDefaultProxTol);
  }
  return out;
}

}  // namespace bpiree
