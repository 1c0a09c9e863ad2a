#include "bpiree/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bpiree {

namespace {

void check_eps(const PenaltySpec& penalty, Index n, std::span<const double> eps) {
  const bool lp = penalty.kind() == PenaltyKind::SmoothedLp;
  if (lp && static_cast<Index>(eps.size()) != n) {
    throw std::invalid_argument("smoothed lp penalty needs " + std::to_string(n) +
                                " smoothing factors, got " + std::to_string(eps.size()));
  }
  if (!lp && !eps.empty()) {
    throw std::invalid_argument("smoothing factors given for a penalty that does not use them");
  }
}

}  // namespace

double penalty_value(const PenaltySpec& penalty, const Eigen::VectorXd& x,
                     std::span<const double> eps) {
  check_eps(penalty, x.size(), eps);
  if (penalty.lambda() == 0.0) return 0.0;
  const ScalarConvex& g = penalty.g();
  double sum = 0.0;
  if (penalty.kind() == PenaltyKind::SmoothedLp) {
    for (Index j = 0; j < x.size(); ++j) sum += penalty.h(std::abs(x(j)), eps[static_cast<std::size_t>(j)]);
  } else {
    for (Index j = 0; j < x.size(); ++j) sum += penalty.h(g(x(j)));
  }
  return penalty.lambda() * sum;
}

double eval_objective(const SmoothLoss& loss, const PenaltySpec& penalty, const Eigen::VectorXd& x,
                      std::span<const double> eps) {
  if (x.size() != loss.dim()) {
    throw std::invalid_argument("eval_objective: x has dimension " + std::to_string(x.size()) +
                                ", loss expects " + std::to_string(loss.dim()));
  }
  return loss.value(x) + penalty_value(penalty, x, eps);
}

Eigen::VectorXd penalty_weights(const PenaltySpec& penalty, const Eigen::VectorXd& x,
                                std::span<const Index> indices, std::span<const double> eps) {
  check_eps(penalty, x.size(), eps);
  Eigen::VectorXd w(static_cast<Index>(indices.size()));
  const double lambda = penalty.lambda();
  const ScalarConvex& g = penalty.g();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Index j = indices[k];
    const double hp = penalty.kind() == PenaltyKind::SmoothedLp
                          ? penalty.h_prime(std::abs(x(j)), eps[static_cast<std::size_t>(j)])
                          : penalty.h_prime(g(x(j)));
    w(static_cast<Index>(k)) = lambda == 0.0 ? 0.0 : lambda * hp;
  }
  return w;
}

Eigen::VectorXd penalty_weights(const PenaltySpec& penalty, const Eigen::VectorXd& x,
                                std::span<const double> eps) {
  std::vector<Index> all(static_cast<std::size_t>(x.size()));
  for (Index j = 0; j < x.size(); ++j) all[static_cast<std::size_t>(j)] = j;
  return penalty_weights(penalty, x, all, eps);
}

// ---------------------------------------------------------------------------

Problem::Problem(std::shared_ptr<const SmoothLoss> loss, PenaltySpec penalty,
                 BlockPartition partition)
    : loss_(std::move(loss)), penalty_(std::move(penalty)), partition_(std::move(partition)) {
  if (!loss_) throw std::invalid_argument("Problem: null loss");
  if (partition_.dim() != loss_->dim()) {
    throw std::invalid_argument("Problem: partition covers " + std::to_string(partition_.dim()) +
                                " indices but loss has dimension " + std::to_string(loss_->dim()));
  }
  if (auto violation = validate_partition(partition_)) {
    throw std::invalid_argument("Problem: " + violation->message);
  }
}

Problem Problem::with_partition(BlockPartition partition) const {
  return Problem(loss_, penalty_, std::move(partition));
}

void Problem::check_block_id(Index block_id) const {
  if (block_id < 0 || block_id >= partition_.num_blocks()) {
    throw std::invalid_argument("unknown block " + std::to_string(block_id) + " (partition has " +
                                std::to_string(partition_.num_blocks()) + " blocks)");
  }
}

Eigen::VectorXd Problem::block_gradient(const Eigen::VectorXd& x, Index block_id) const {
  check_block_id(block_id);
  return loss_->block_gradient(x, partition_.block(block_id));
}

double Problem::block_lipschitz(Index block_id) const {
  check_block_id(block_id);
  return loss_->block_lipschitz(partition_.block(block_id));
}

}  // namespace bpiree
