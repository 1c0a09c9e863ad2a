#include "bpiree/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace bpiree {

namespace {

// Golden-ratio sequence in (0.5, 1.5); never structured enough to be
// orthogonal to a dominant eigenvector in practice.
Eigen::VectorXd start_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  constexpr double phi = 0.6180339887498949;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double frac = std::fmod(static_cast<double>(j + 1) * phi, 1.0);
    v(j) = 0.5 + frac;
  }
  return v.normalized();
}

}  // namespace

PowerIterationResult squared_spectral_norm(const Eigen::MatrixXd& M, double tol, int max_iter) {
  const Eigen::Index cols = M.cols();
  if (cols == 0 || M.rows() == 0) return {0.0, 0, true};

  Eigen::VectorXd v = start_vector(cols);
  Eigen::VectorXd Mv = M * v;
  if (Mv.squaredNorm() == 0.0) {
    // Start vector landed in the null space; restart from the heaviest column.
    Eigen::Index best = 0;
    const double heaviest = M.colwise().squaredNorm().maxCoeff(&best);
    if (heaviest == 0.0) return {0.0, 0, true};
    v.setZero();
    v(best) = 1.0;
    Mv = M * v;
  }

  double value = Mv.squaredNorm();
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = M.transpose() * Mv;
    const double wn = w.norm();
    if (wn == 0.0) return {value, it, true};
    v = w / wn;
    Mv.noalias() = M * v;
    const double next = Mv.squaredNorm();
    const bool done = std::abs(next - value) <= tol * std::max(next, 1e-300);
    value = next;
    if (done) return {value, it, true};
  }
  return {value, max_iter, false};
}

double lipschitz_from_columns(const Eigen::MatrixXd& M) {
  const double sq = squared_spectral_norm(M).value;
  return std::max(kLipschitzSafety * sq, kLipschitzFloor);
}

}  // namespace bpiree
