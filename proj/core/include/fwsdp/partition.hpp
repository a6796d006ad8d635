#pragma once

#include <string>
#include <vector>

namespace fwsdp {

/// Contiguous block partition of the index range [0, N). Immutable after
/// construction; cheap to copy and safe to share between threads.
///
/// Blocks are 1-indexed in the public interface (pair labels, reports);
/// offsets are 0-based row indices.
class Partition {
 public:
  /// `sizes` must be non-empty with every entry >= 1.
  explicit Partition(std::vector<int> sizes);

  const std::vector<int>& sizes() const { return sizes_; }
  int block_count() const { return static_cast<int>(sizes_.size()); }
  int dimension() const { return dimension_; }

  /// Size of block i, 1-indexed.
  int block_size(int i) const;
  /// First row of block i, 1-indexed block, 0-based row.
  int offset(int i) const;

  bool operator==(const Partition& other) const { return sizes_ == other.sizes_; }

  /// Comma-separated sizes, e.g. "1,1,2".
  std::string to_text() const;
  static Partition from_text(const std::string& text);

 private:
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int dimension_ = 0;
};

/// Row ranges of one ordered block pair (i, j), i < j, 1-indexed.
/// The half-open ranges [off_i, off_i+len_i) and [off_j, off_j+len_j) select
/// the rows that the pair's basis matrix stacks together.
struct PairRange {
  int i = 0;
  int j = 0;
  int off_i = 0;
  int len_i = 0;
  int off_j = 0;
  int len_j = 0;

  int pair_dim() const { return len_i + len_j; }
};

/// True iff every block of `alpha` is a contiguous concatenation of blocks
/// of `beta` (so `beta` refines `alpha`). Reflexive. Throws Error when the
/// two partitions cover different dimensions.
bool is_subpartition(const Partition& beta, const Partition& alpha);

/// p blocks with sizes from {floor(N/p), ceil(N/p)} summing to N, the
/// smaller size as often as possible, smaller blocks first.
Partition uniform_partition(int dimension, int blocks);

/// All p(p-1)/2 block pairs (i, j) with i < j in lexicographic order.
std::vector<PairRange> pair_ranges(const Partition& alpha);

/// Row range of a single pair, 1 <= i < j <= p.
PairRange pair_range(const Partition& alpha, int i, int j);

}  // namespace fwsdp
