#include "bpiree/loss.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpiree/linalg.hpp"

namespace bpiree {

Eigen::VectorXd SmoothLoss::block_gradient(const Eigen::VectorXd& x,
                                           std::span<const Index> block) const {
  check_block(block);
  const Eigen::VectorXd g = gradient(x);
  Eigen::VectorXd out(static_cast<Index>(block.size()));
  for (std::size_t j = 0; j < block.size(); ++j) out(static_cast<Index>(j)) = g(block[j]);
  return out;
}

void SmoothLoss::check_point(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) +
                                ", loss expects " + std::to_string(dim()));
  }
}

void SmoothLoss::check_block(std::span<const Index> block) const {
  if (block.empty()) throw std::invalid_argument("empty block");
  for (Index j : block) {
    if (j < 0 || j >= dim()) {
      throw std::invalid_argument("block index " + std::to_string(j) + " outside [0, " +
                                  std::to_string(dim()) + ")");
    }
  }
}

// ---------------------------------------------------------------------------

LeastSquares::LeastSquares(Eigen::MatrixXd A, Eigen::VectorXd b)
    : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() != b_.size()) {
    throw std::invalid_argument("LeastSquares: A has " + std::to_string(A_.rows()) +
                                " rows but b has length " + std::to_string(b_.size()));
  }
  if (A_.cols() == 0) throw std::invalid_argument("LeastSquares: A has no columns");
}

double LeastSquares::value(const Eigen::VectorXd& x) const {
  check_point(x);
  return 0.5 * (A_ * x - b_).squaredNorm();
}

Eigen::VectorXd LeastSquares::gradient(const Eigen::VectorXd& x) const {
  check_point(x);
  const Eigen::VectorXd r = A_ * x - b_;
  return A_.transpose() * r;
}

Eigen::VectorXd LeastSquares::block_gradient(const Eigen::VectorXd& x,
                                             std::span<const Index> block) const {
  check_point(x);
  check_block(block);
  const Eigen::VectorXd r = A_ * x - b_;
  Eigen::VectorXd out(static_cast<Index>(block.size()));
  for (std::size_t j = 0; j < block.size(); ++j) {
    out(static_cast<Index>(j)) = A_.col(block[j]).dot(r);
  }
  return out;
}

double LeastSquares::block_lipschitz(std::span<const Index> block) const {
  check_block(block);
  Eigen::MatrixXd sub(A_.rows(), static_cast<Index>(block.size()));
  for (std::size_t j = 0; j < block.size(); ++j) sub.col(static_cast<Index>(j)) = A_.col(block[j]);
  return lipschitz_from_columns(sub);
}

// ---------------------------------------------------------------------------

MatrixLeastSquares::MatrixLeastSquares(Eigen::MatrixXd A, Eigen::MatrixXd B)
    : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() != B_.rows()) {
    throw std::invalid_argument("MatrixLeastSquares: A has " + std::to_string(A_.rows()) +
                                " rows but B has " + std::to_string(B_.rows()));
  }
  if (A_.cols() == 0 || B_.cols() == 0) {
    throw std::invalid_argument("MatrixLeastSquares: empty A or B");
  }
}

double MatrixLeastSquares::value(const Eigen::VectorXd& x) const {
  check_point(x);
  const Eigen::Map<const Eigen::MatrixXd> X(x.data(), A_.cols(), B_.cols());
  return 0.5 * (A_ * X - B_).squaredNorm();
}

Eigen::VectorXd MatrixLeastSquares::gradient(const Eigen::VectorXd& x) const {
  check_point(x);
  const Eigen::Map<const Eigen::MatrixXd> X(x.data(), A_.cols(), B_.cols());
  const Eigen::MatrixXd G = A_.transpose() * (A_ * X - B_);
  return Eigen::Map<const Eigen::VectorXd>(G.data(), G.size());
}

Eigen::VectorXd MatrixLeastSquares::block_gradient(const Eigen::VectorXd& x,
                                                   std::span<const Index> block) const {
  check_point(x);
  check_block(block);
  const Index q = A_.cols();
  const Eigen::Map<const Eigen::MatrixXd> X(x.data(), q, B_.cols());

  // Residual per touched column, computed once.
  std::map<Index, Eigen::VectorXd> residuals;
  for (Index flat : block) {
    const Index c = flat / q;
    if (!residuals.contains(c)) residuals.emplace(c, A_ * X.col(c) - B_.col(c));
  }
  Eigen::VectorXd out(static_cast<Index>(block.size()));
  for (std::size_t j = 0; j < block.size(); ++j) {
    const Index flat = block[j];
    out(static_cast<Index>(j)) = A_.col(flat % q).dot(residuals.at(flat / q));
  }
  return out;
}

double MatrixLeastSquares::block_lipschitz(std::span<const Index> block) const {
  check_block(block);
  const Index q = A_.cols();
  std::map<Index, std::vector<Index>> rows_by_column;
  for (Index flat : block) rows_by_column[flat / q].push_back(flat % q);

  double best = 0.0;
  std::map<std::vector<Index>, double> seen;
  for (auto& [c, rows] : rows_by_column) {
    std::sort(rows.begin(), rows.end());
    auto it = seen.find(rows);
    if (it == seen.end()) {
      Eigen::MatrixXd sub(A_.rows(), static_cast<Index>(rows.size()));
      for (std::size_t j = 0; j < rows.size(); ++j) sub.col(static_cast<Index>(j)) = A_.col(rows[j]);
      it = seen.emplace(rows, lipschitz_from_columns(sub)).first;
    }
    best = std::max(best, it->second);
  }
  return best;
}

}  // namespace bpiree
