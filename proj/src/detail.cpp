#include "detail.hpp"

#include <cmath>
#include <limits>

namespace bpiree::detail {

Eigen::VectorXd gather(const Eigen::VectorXd& x, std::span<const Index> indices) {
  Eigen::VectorXd out(static_cast<Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) out(static_cast<Index>(j)) = x(indices[j]);
  return out;
}

void scatter(Eigen::VectorXd& x, std::span<const Index> indices, const Eigen::VectorXd& values) {
  for (std::size_t j = 0; j < indices.size(); ++j) x(indices[j]) = values(static_cast<Index>(j));
}

RunMonitor::RunMonitor(const Problem& problem, const SolverConfig& config,
                       const Observer& observer)
    : problem_(problem),
      config_(config),
      observer_(observer),
      lp_(problem.penalty().kind() == PenaltyKind::SmoothedLp) {
  if (lp_) support_.emplace(config.support_window);
}

void RunMonitor::begin_iteration() {
  if (config_.record_timing) started_ = std::chrono::steady_clock::now();
}

void RunMonitor::end_iteration(std::int64_t k, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& eps, double F, double step_rel,
                               double beta, Index block, bool retried) {
  if (support_) support_->record(k, sign_pattern(x));

  if (config_.record_trace) {
    TraceRecord rec{};
    rec.k = k;
    rec.F = F;
    rec.step_rel = step_rel;
    rec.beta = beta;
    rec.block = block;
    rec.retried = retried;
    rec.residual = std::numeric_limits<double>::quiet_NaN();
    if (problem_.penalty().g().is_abs()) {
      const std::span<const double> e(eps.data(), static_cast<std::size_t>(eps.size()));
      rec.residual = stationarity_residual(problem_, x, penalty_weights(problem_.penalty(), x, e));
    }
    if (config_.record_timing) {
      rec.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                        std::chrono::steady_clock::now() - started_)
                        .count();
    }
    if (lp_) {
      rec.lp = LpTraceFields{eps.minCoeff(), eps.maxCoeff(), support_->support_size(),
                             support_->fixed()};
    }
    trace_.push_back(rec);
  }

  if (observer_) observer_(IterationView{k, x, eps, F});
}

void RunMonitor::finish(SolveResult& result) {
  result.trace = std::move(trace_);
  if (support_) result.support = support_->report();
}

}  // namespace bpiree::detail
