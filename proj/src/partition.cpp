#include "bpiree/partition.hpp"

#include <stdexcept>
#include <string>

namespace bpiree {

BlockPartition BlockPartition::contiguous(Index n, Index m) {
  if (n <= 0) throw std::invalid_argument("contiguous partition: n must be positive");
  if (m <= 0 || m > n) throw std::invalid_argument("contiguous partition: need 1 <= m <= n");
  std::vector<std::vector<Index>> blocks(static_cast<std::size_t>(m));
  const Index base = n / m;
  const Index extra = n % m;
  Index next = 0;
  for (Index i = 0; i < m; ++i) {
    const Index size = base + (i < extra ? 1 : 0);
    auto& block = blocks[static_cast<std::size_t>(i)];
    block.reserve(static_cast<std::size_t>(size));
    for (Index j = 0; j < size; ++j) block.push_back(next++);
  }
  return BlockPartition(std::move(blocks), n);
}

std::optional<PartitionViolation> validate_partition(const BlockPartition& partition) {
  using Kind = PartitionViolation::Kind;
  const Index n = partition.dim();
  if (partition.num_blocks() == 0) {
    return PartitionViolation{Kind::NoBlocks, -1, "partition has no blocks"};
  }
  std::vector<char> seen(static_cast<std::size_t>(n > 0 ? n : 0), 0);
  for (Index i = 0; i < partition.num_blocks(); ++i) {
    const auto block = partition.block(i);
    if (block.empty()) {
      return PartitionViolation{Kind::EmptyBlock, i, "block " + std::to_string(i) + " is empty"};
    }
    for (Index j : block) {
      if (j < 0 || j >= n) {
        return PartitionViolation{Kind::OutOfRange, j,
                                  "index " + std::to_string(j) + " outside [0, " +
                                      std::to_string(n) + ")"};
      }
      auto& flag = seen[static_cast<std::size_t>(j)];
      if (flag) {
        return PartitionViolation{Kind::Duplicate, j,
                                  "index " + std::to_string(j) + " duplicated"};
      }
      flag = 1;
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (!seen[static_cast<std::size_t>(j)]) {
      return PartitionViolation{Kind::Uncovered, j, "index " + std::to_string(j) + " uncovered"};
    }
  }
  return std::nullopt;
}

}  // namespace bpiree
