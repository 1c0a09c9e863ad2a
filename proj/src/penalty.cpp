#include "bpiree/penalty.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bpiree {

ScalarConvex ScalarConvex::abs() {
  return ScalarConvex(
      "abs", [](double u) { return std::abs(u); },
      [](double u) -> Subgradient {
        if (u > 0) return {1.0, 1.0};
        if (u < 0) return {-1.0, -1.0};
        return {-1.0, 1.0};
      },
      true);
}

ScalarConvex ScalarConvex::custom(std::string name, ValueFn value, SubgradientFn subgradient) {
  if (!value || !subgradient) throw std::invalid_argument("ScalarConvex: empty callable");
  return ScalarConvex(std::move(name), std::move(value), std::move(subgradient), false);
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("penalty: lambda must be finite and >= 0");
  }
}

}  // namespace

PenaltySpec PenaltySpec::log(double lambda, double eps_bar) {
  check_lambda(lambda);
  if (!(eps_bar > 0.0) || !std::isfinite(eps_bar)) {
    throw std::invalid_argument("log penalty: eps_bar must be finite and > 0");
  }
  PenaltySpec spec(PenaltyKind::Log, lambda, ScalarConvex::abs());
  spec.eps_bar_ = eps_bar;
  return spec;
}

PenaltySpec PenaltySpec::smoothed_lp(double lambda, double p) {
  check_lambda(lambda);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("smoothed lp penalty: p must lie in (0, 1)");
  PenaltySpec spec(PenaltyKind::SmoothedLp, lambda, ScalarConvex::abs());
  spec.p_ = p;
  return spec;
}

PenaltySpec PenaltySpec::custom(double lambda, ScalarFn h, ScalarFn h_prime, ScalarConvex g) {
  check_lambda(lambda);
  if (!h || !h_prime) throw std::invalid_argument("custom penalty: empty callable");
  PenaltySpec spec(PenaltyKind::Custom, lambda, std::move(g));
  spec.h_ = std::move(h);
  spec.h_prime_ = std::move(h_prime);
  return spec;
}

double PenaltySpec::h(double t) const {
  switch (kind_) {
    case PenaltyKind::Log:
      return std::log(t + eps_bar_) - std::log(eps_bar_);
    case PenaltyKind::Custom:
      return h_(t);
    case PenaltyKind::SmoothedLp:
      break;
  }
  throw std::invalid_argument("smoothed lp penalty needs a smoothing factor");
}

double PenaltySpec::h_prime(double t) const {
  switch (kind_) {
    case PenaltyKind::Log:
      return 1.0 / (t + eps_bar_);
    case PenaltyKind::Custom:
      return h_prime_(t);
    case PenaltyKind::SmoothedLp:
      break;
  }
  throw std::invalid_argument("smoothed lp penalty needs a smoothing factor");
}

double PenaltySpec::h(double t, double eps) const {
  if (kind_ != PenaltyKind::SmoothedLp) return h(t);
  return std::pow(t + eps * eps, p_);
}

double PenaltySpec::h_prime(double t, double eps) const {
  if (kind_ != PenaltyKind::SmoothedLp) return h_prime(t);
  return p_ * std::pow(t + eps * eps, p_ - 1.0);
}

std::string PenaltySpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case PenaltyKind::Log:
      os << "log(lambda=" << lambda_ << ", eps_bar=" << eps_bar_ << ")";
      break;
    case PenaltyKind::SmoothedLp:
      os << "smoothed_lp(lambda=" << lambda_ << ", p=" << p_ << ")";
      break;
    case PenaltyKind::Custom:
      os << "custom(lambda=" << lambda_ << ", g=" << g_.name() << ")";
      break;
  }
  return os.str();
}

}  // namespace bpiree
