#pragma once

#include <memory>
#include <span>

#include <Eigen/Core>

#include "bpiree/loss.hpp"
#include "bpiree/partition.hpp"
#include "bpiree/penalty.hpp"

namespace bpiree {

/// λ·Σ_j h(g(x_j)), or λ·Σ_j (|x_j| + ε_j²)^p for SmoothedLp.
/// `eps` must be supplied (length n) iff the penalty is SmoothedLp.
double penalty_value(const PenaltySpec& penalty, const Eigen::VectorXd& x,
                     std::span<const double> eps = {});

/// F(x) = f(x) + penalty_value(x). Throws std::invalid_argument on dimension
/// mismatch or when `eps` presence does not match the penalty variant.
double eval_objective(const SmoothLoss& loss, const PenaltySpec& penalty, const Eigen::VectorXd& x,
                      std::span<const double> eps = {});

/// Reweighting weights w_j = λ·h′(g(x_j)) for j in `indices`
/// (SmoothedLp: λ·p·(|x_j| + ε_j²)^{p−1}).
Eigen::VectorXd penalty_weights(const PenaltySpec& penalty, const Eigen::VectorXd& x,
                                std::span<const Index> indices, std::span<const double> eps = {});

/// Same, over all coordinates.
Eigen::VectorXd penalty_weights(const PenaltySpec& penalty, const Eigen::VectorXd& x,
                                std::span<const double> eps = {});

/// Immutable problem instance: loss, penalty and a validated block partition.
class Problem {
 public:
  Problem(std::shared_ptr<const SmoothLoss> loss, PenaltySpec penalty, BlockPartition partition);

  const SmoothLoss& loss() const noexcept { return *loss_; }
  const std::shared_ptr<const SmoothLoss>& loss_ptr() const noexcept { return loss_; }
  const PenaltySpec& penalty() const noexcept { return penalty_; }
  const BlockPartition& partition() const noexcept { return partition_; }
  Index dim() const noexcept { return partition_.dim(); }
  Index num_blocks() const noexcept { return partition_.num_blocks(); }

  /// Same problem, different blocks.
  Problem with_partition(BlockPartition partition) const;

  /// ∇_{s_i} f(x). Throws std::invalid_argument for an unknown block id.
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& x, Index block_id) const;
  double block_lipschitz(Index block_id) const;

  double objective(const Eigen::VectorXd& x, std::span<const double> eps = {}) const {
    return eval_objective(*loss_, penalty_, x, eps);
  }

 private:
  void check_block_id(Index block_id) const;

  std::shared_ptr<const SmoothLoss> loss_;
  PenaltySpec penalty_;
  BlockPartition partition_;
};

}  // namespace bpiree
