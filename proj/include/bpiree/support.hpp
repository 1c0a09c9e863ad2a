#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bpiree/partition.hpp"

namespace bpiree {

using SignVector = std::vector<std::int8_t>;

/// Componentwise sign in {−1, 0, 1}; zero means exactly zero.
SignVector sign_pattern(const Eigen::VectorXd& x);

struct SupportReport {
  bool fixed = false;
  std::optional<std::int64_t> K_observed;  // first iteration of the terminal constant run
  SignVector sign;                         // last recorded pattern
};

/// `history[i]` is the sign pattern after iteration i + 1. Fixed iff the
/// last `window` patterns are identical; K_observed is only reported when
/// fixed.
SupportReport support_monitor(std::span<const SignVector> history, Index window);

/// Streaming equivalent of support_monitor(): keeps the last pattern and the
/// length of the run it belongs to.
class SupportTracker {
 public:
  explicit SupportTracker(Index window = 100);

  void record(std::int64_t k, SignVector sign);
  bool fixed() const noexcept { return run_length_ >= window_; }
  SupportReport report() const;
  Index support_size() const noexcept { return support_size_; }

 private:
  Index window_;
  SignVector last_;
  std::int64_t run_start_ = 0;
  std::int64_t run_length_ = 0;
  Index support_size_ = 0;
};

}  // namespace bpiree
