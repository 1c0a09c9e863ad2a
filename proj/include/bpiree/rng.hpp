#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "bpiree/partition.hpp"

namespace bpiree {

/// Seeded generator with a fixed, documented algorithm so that every platform
/// produces the same stream:
///   - raw bits: std::mt19937_64 (its output sequence is fixed by the C++ standard);
///   - uniform doubles: top 53 bits scaled by 2⁻⁵³, in [0, 1);
///   - integers below a bound: rejection sampling on the raw 64-bit output;
///   - standard normals: Marsaglia's polar method, the second variate cached.
/// Library distributions (std::normal_distribution etc.) are deliberately not
/// used because their algorithms are implementation-defined.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64/polar/v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t bound);

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// k distinct indices from [0, n), returned in increasing order.
  std::vector<Index> sample_without_replacement(Index n, Index k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 mix of (seed, stream); used to derive independent substreams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace bpiree
