#include "bpiree/momentum.hpp"

#include <cmath>

namespace bpiree {

MomentumStep fista_momentum(const MomentumClock& clock) {
  MomentumClock next = clock;
  const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * clock.t_curr * clock.t_curr));
  const double beta = (clock.t_curr - 1.0) / t_next;
  next.t_prev = clock.t_curr;
  next.t_curr = t_next;
  next.steps_since_restart = clock.steps_since_restart + 1;
  if (clock.restart_period > 0 && next.steps_since_restart >= clock.restart_period) {
    next.t_prev = 1.0;
    next.t_curr = 1.0;
    next.steps_since_restart = 0;
  }
  return {beta, next};
}

}  // namespace bpiree
