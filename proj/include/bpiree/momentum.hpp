#pragma once

#include <cstdint>

namespace bpiree {

/// FISTA t-sequence with fixed restart: t_next = (1 + √(1 + 4t²)) / 2,
/// β = (t − 1) / t_next, and both t values reset to 1 every
/// `restart_period` calls.
struct MomentumClock {
  double t_prev = 1.0;
  double t_curr = 1.0;
  std::int64_t steps_since_restart = 0;
  std::int64_t restart_period = 200;

  bool operator==(const MomentumClock&) const = default;
};

struct MomentumStep {
  double beta;
  MomentumClock clock;
};

MomentumStep fista_momentum(const MomentumClock& clock);

/// In-place form: returns β and advances the clock.
inline double advance(MomentumClock& clock) {
  const MomentumStep step = fista_momentum(clock);
  clock = step.clock;
  return step.beta;
}

}  // namespace bpiree
