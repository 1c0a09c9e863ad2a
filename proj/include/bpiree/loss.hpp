#pragma once

#include <span>

#include <Eigen/Core>

#include "bpiree/partition.hpp"

namespace bpiree {

/// Smooth part f of the composite objective, with per-block gradient access.
///
/// Implementations are immutable after construction and safe to share
/// between concurrent solver runs.
class SmoothLoss {
 public:
  virtual ~SmoothLoss() = default;

  virtual Index dim() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;

  /// ∇f(x) restricted to `block`, in block order. Indices must lie in [0, dim).
  virtual Eigen::VectorXd block_gradient(const Eigen::VectorXd& x,
                                         std::span<const Index> block) const;

  /// Upper bound on the Lipschitz constant of the block gradient under
  /// changes confined to `block`.
  virtual double block_lipschitz(std::span<const Index> block) const = 0;

 protected:
  void check_point(const Eigen::VectorXd& x) const;
  void check_block(std::span<const Index> block) const;
};

/// f(x) = ½‖Ax − b‖² with A ∈ ℝ^{n×q}, b ∈ ℝ^n.
class LeastSquares final : public SmoothLoss {
 public:
  LeastSquares(Eigen::MatrixXd A, Eigen::VectorXd b);

  Index dim() const override { return A_.cols(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& x,
                                 std::span<const Index> block) const override;
  /// Power iteration on A(:, block) with safety factor 1.01 and floor 1e-12.
  double block_lipschitz(std::span<const Index> block) const override;

  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::VectorXd& b() const noexcept { return b_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
};

/// f(X) = ½‖AX − B‖²_F over X ∈ ℝ^{q×t}, flattened column-major: entry
/// X(i, c) lives at flat index i + q·c.
class MatrixLeastSquares final : public SmoothLoss {
 public:
  MatrixLeastSquares(Eigen::MatrixXd A, Eigen::MatrixXd B);

  Index dim() const override { return A_.cols() * B_.cols(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& x,
                                 std::span<const Index> block) const override;
  /// The block Hessian is block-diagonal across columns of X, so the
  /// constant is the maximum over touched columns of ‖A(:, rows_c)‖².
  double block_lipschitz(std::span<const Index> block) const override;

  const Eigen::MatrixXd& A() const noexcept { return A_; }
  const Eigen::MatrixXd& B() const noexcept { return B_; }
  Index rows_of_x() const noexcept { return A_.cols(); }
  Index cols_of_x() const noexcept { return B_.cols(); }

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
};

}  // namespace bpiree
