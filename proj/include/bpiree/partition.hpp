#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bpiree {

using Index = std::ptrdiff_t;

/// Ordered list of disjoint index blocks covering {0, ..., n-1}.
///
/// Indices are 0-based here, in serialized instances and on the CLI. The
/// constructor does not validate; use validate_partition() or build a
/// Problem, which rejects invalid partitions.
class BlockPartition {
 public:
  BlockPartition() = default;
  BlockPartition(std::vector<std::vector<Index>> blocks, Index n)
      : blocks_(std::move(blocks)), n_(n) {}

  /// m contiguous ranges whose sizes differ by at most one.
  static BlockPartition contiguous(Index n, Index m);
  static BlockPartition single(Index n) { return contiguous(n, 1); }

  Index dim() const noexcept { return n_; }
  Index num_blocks() const noexcept { return static_cast<Index>(blocks_.size()); }
  std::span<const Index> block(Index i) const { return blocks_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::vector<Index>>& blocks() const noexcept { return blocks_; }

  bool operator==(const BlockPartition&) const = default;

 private:
  std::vector<std::vector<Index>> blocks_;
  Index n_ = 0;
};

struct PartitionViolation {
  enum class Kind { NoBlocks, EmptyBlock, OutOfRange, Duplicate, Uncovered };
  Kind kind;
  Index index;  // offending index, or offending block id for EmptyBlock
  std::string message;
};

/// Returns nothing when the blocks are nonempty, pairwise disjoint and cover
/// {0..n-1}; otherwise the first violation found (blocks scanned in order,
/// then coverage checked in increasing index order).
std::optional<PartitionViolation> validate_partition(const BlockPartition& partition);

}  // namespace bpiree
