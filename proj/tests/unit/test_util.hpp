#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Core>

// Test-side random data comes from std::mt19937 with library distributions,
// independent of the generator under test.
namespace testutil {

inline Eigen::MatrixXd random_matrix(std::mt19937& gen, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> N(0.0, 1.0);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = N(gen);
  return M;
}

inline Eigen::VectorXd random_vector(std::mt19937& gen, Eigen::Index n) {
  return random_matrix(gen, n, 1);
}

// Central finite difference of f along coordinate j.
inline double central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, Eigen::Index j, double h = 1e-6) {
  Eigen::VectorXd xp = x, xm = x;
  xp(j) += h;
  xm(j) -= h;
  return (f(xp) - f(xm)) / (2.0 * h);
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), abs_floor});
}

}  // namespace testutil
