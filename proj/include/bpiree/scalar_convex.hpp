#pragma once

#include <functional>
#include <string>

namespace bpiree {

/// Closed interval [lo, hi] of subgradients at a point.
struct Subgradient {
  double lo;
  double hi;
};

/// Nonnegative closed convex scalar map g, given by its value and one-sided
/// derivatives. The absolute value is special-cased so the prox has a closed
/// form.
class ScalarConvex {
 public:
  using ValueFn = std::function<double(double)>;
  using SubgradientFn = std::function<Subgradient(double)>;

  static ScalarConvex abs();
  static ScalarConvex custom(std::string name, ValueFn value, SubgradientFn subgradient);

  bool is_abs() const noexcept { return is_abs_; }
  const std::string& name() const noexcept { return name_; }
  double operator()(double u) const { return value_(u); }
  Subgradient subgradient(double u) const { return subgradient_(u); }

 private:
  ScalarConvex(std::string name, ValueFn value, SubgradientFn subgradient, bool is_abs)
      : name_(std::move(name)),
        value_(std::move(value)),
        subgradient_(std::move(subgradient)),
        is_abs_(is_abs) {}

  std::string name_;
  ValueFn value_;
  SubgradientFn subgradient_;
  bool is_abs_ = false;
};

}  // namespace bpiree
