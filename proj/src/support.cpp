#include "bpiree/support.hpp"

#include <algorithm>
#include <stdexcept>

namespace bpiree {

SignVector sign_pattern(const Eigen::VectorXd& x) {
  SignVector s(static_cast<std::size_t>(x.size()));
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    s[static_cast<std::size_t>(j)] = static_cast<std::int8_t>((x(j) > 0.0) - (x(j) < 0.0));
  }
  return s;
}

SupportReport support_monitor(std::span<const SignVector> history, Index window) {
  if (window < 1) throw std::invalid_argument("support_monitor: window must be >= 1");
  SupportReport report;
  if (history.empty()) return report;
  report.sign = history.back();
  std::size_t start = history.size() - 1;
  while (start > 0 && history[start - 1] == history.back()) --start;
  const auto run_length = static_cast<Index>(history.size() - start);
  report.fixed = run_length >= window;
  if (report.fixed) report.K_observed = static_cast<std::int64_t>(start) + 1;
  return report;
}

SupportTracker::SupportTracker(Index window) : window_(window) {
  if (window < 1) throw std::invalid_argument("SupportTracker: window must be >= 1");
}

void SupportTracker::record(std::int64_t k, SignVector sign) {
  if (run_length_ > 0 && sign == last_) {
    ++run_length_;
    return;
  }
  support_size_ = static_cast<Index>(std::count_if(sign.begin(), sign.end(),
                                                   [](std::int8_t s) { return s != 0; }));
  last_ = std::move(sign);
  run_start_ = k;
  run_length_ = 1;
}

SupportReport SupportTracker::report() const {
  SupportReport report;
  report.sign = last_;
  report.fixed = fixed();
  if (report.fixed) report.K_observed = run_start_;
  return report;
}

}  // namespace bpiree
