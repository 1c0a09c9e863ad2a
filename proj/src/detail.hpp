#pragma once

#include <chrono>
#include <optional>
#include <span>

#include <Eigen/Core>

#include "bpiree/solver.hpp"

namespace bpiree::detail {

Eigen::VectorXd gather(const Eigen::VectorXd& x, std::span<const Index> indices);
void scatter(Eigen::VectorXd& x, std::span<const Index> indices, const Eigen::VectorXd& values);

inline double relative_step(double step_norm, double base_norm) {
  return step_norm / std::max(base_norm, 1e-12);
}

/// Per-iteration bookkeeping shared by every solver loop: trace records,
/// support tracking for smoothed lp, the observer callback and timing.
class RunMonitor {
 public:
  RunMonitor(const Problem& problem, const SolverConfig& config, const Observer& observer);

  void begin_iteration();
  void end_iteration(std::int64_t k, const Eigen::VectorXd& x, const Eigen::VectorXd& eps,
                     double F, double step_rel, double beta, Index block, bool retried);
  void finish(SolveResult& result);

 private:
  const Problem& problem_;
  const SolverConfig& config_;
  const Observer& observer_;
  bool lp_;
  std::optional<SupportTracker> support_;
  std::vector<TraceRecord> trace_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace bpiree::detail
