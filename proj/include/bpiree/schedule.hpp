#pragma once

#include <cstdint>

#include "bpiree/partition.hpp"

namespace bpiree {

/// Block selection rule. Both rules are essentially cyclic: every block is
/// picked in any window of window_length() consecutive iterations.
struct Schedule {
  enum class Kind { Cyclic, ShuffledCycles };

  Kind kind = Kind::Cyclic;
  std::uint64_t seed = 0;  // ShuffledCycles only

  static Schedule cyclic() { return {}; }
  static Schedule shuffled(std::uint64_t seed) { return {Kind::ShuffledCycles, seed}; }

  /// m for Cyclic, 2m − 1 for ShuffledCycles.
  Index window_length(Index m) const noexcept {
    return kind == Kind::Cyclic ? m : 2 * m - 1;
  }

  bool operator==(const Schedule&) const = default;
};

/// 0-based block chosen at iteration k ≥ 1 out of m.
///
/// Cyclic: (k − 1) mod m. ShuffledCycles: entry k of the concatenation of
/// independent uniform permutations of {0..m−1}; cycle c uses a generator
/// seeded with derive_seed(seed, c), so the pick is a pure function of
/// (seed, k, m).
Index choose_block(const Schedule& schedule, std::int64_t k, Index m);

}  // namespace bpiree
