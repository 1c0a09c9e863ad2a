#pragma once

#include <functional>
#include <string>

#include "bpiree/scalar_convex.hpp"

namespace bpiree {

enum class PenaltyKind { Log, SmoothedLp, Custom };

/// Separable penalty λ·Σ h(g(x_j)) with h concave increasing.
///
/// - Log:        h(t) = log(t + ε̄) − log(ε̄),  h′(t) = 1/(t + ε̄), g = |·|.
/// - SmoothedLp: h(t; ε_j) = (t + ε_j²)^p, h′(t; ε_j) = p(t + ε_j²)^{p−1},
///               g = |·|. The per-coordinate ε lives in the solver state.
/// - Custom:     user-supplied h, h′ and g.
///
/// λ = 0 is accepted and turns the penalty off.
class PenaltySpec {
 public:
  using ScalarFn = std::function<double(double)>;

  static PenaltySpec log(double lambda, double eps_bar);
  static PenaltySpec smoothed_lp(double lambda, double p);
  static PenaltySpec custom(double lambda, ScalarFn h, ScalarFn h_prime,
                            ScalarConvex g = ScalarConvex::abs());

  PenaltyKind kind() const noexcept { return kind_; }
  double lambda() const noexcept { return lambda_; }
  double eps_bar() const noexcept { return eps_bar_; }
  double p() const noexcept { return p_; }
  const ScalarConvex& g() const noexcept { return g_; }

  /// Log and Custom variants.
  double h(double t) const;
  double h_prime(double t) const;
  /// SmoothedLp variant.
  double h(double t, double eps) const;
  double h_prime(double t, double eps) const;

  std::string describe() const;

 private:
  PenaltySpec(PenaltyKind kind, double lambda, ScalarConvex g)
      : kind_(kind), lambda_(lambda), g_(std::move(g)) {}

  PenaltyKind kind_;
  double lambda_;
  double eps_bar_ = 0.0;
  double p_ = 0.0;
  ScalarConvex g_;
  ScalarFn h_;
  ScalarFn h_prime_;
};

}  // namespace bpiree
