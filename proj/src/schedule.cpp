#include "bpiree/schedule.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

#include "bpiree/rng.hpp"

namespace bpiree {

Index choose_block(const Schedule& schedule, std::int64_t k, Index m) {
  if (k < 1) throw std::invalid_argument("choose_block: iterations are numbered from 1");
  if (m < 1) throw std::invalid_argument("choose_block: need at least one block");
  const std::int64_t offset = k - 1;
  const auto position = static_cast<Index>(offset % m);
  if (schedule.kind == Schedule::Kind::Cyclic || m == 1) return position;

  const auto cycle = static_cast<std::uint64_t>(offset / m);
  Rng rng(derive_seed(schedule.seed, cycle));
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  rng.shuffle(order);
  return order[static_cast<std::size_t>(position)];
}

}  // namespace bpiree
