#include "fwsdp/partition.hpp"

#include <charconv>
#include <numeric>
#include <sstream>

#include "fwsdp/errors.hpp"

namespace fwsdp {

Partition::Partition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw Error("partition must have at least one block");
  offsets_.reserve(sizes_.size());
  for (int k : sizes_) {
    if (k < 1) throw Error("partition block sizes must be positive");
    offsets_.push_back(dimension_);
    dimension_ += k;
  }
}

int Partition::block_size(int i) const {
  if (i < 1 || i > block_count()) throw Error("partition block index out of range");
  return sizes_[static_cast<size_t>(i) - 1];
}

int Partition::offset(int i) const {
  if (i < 1 || i > block_count()) throw Error("partition block index out of range");
  return offsets_[static_cast<size_t>(i) - 1];
}

std::string Partition::to_text() const {
  std::ostringstream out;
  for (size_t l = 0; l < sizes_.size(); ++l) {
    if (l > 0) out << ',';
    out << sizes_[l];
  }
  return out.str();
}

Partition Partition::from_text(const std::string& text) {
  std::vector<int> sizes;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, value);
    if (ec != std::errc{} || ptr != text.data() + comma)
      throw ParseError("invalid partition literal '" + text + "'");
    sizes.push_back(value);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return Partition(std::move(sizes));
}

bool is_subpartition(const Partition& beta, const Partition& alpha) {
  if (beta.dimension() != alpha.dimension())
    throw Error("cannot compare partitions of dimensions " +
                std::to_string(beta.dimension()) + " and " +
                std::to_string(alpha.dimension()));
  // Greedily consume beta blocks; each alpha block must be hit exactly.
  size_t b = 0;
  for (int target : alpha.sizes()) {
    int acc = 0;
    while (acc < target && b < beta.sizes().size()) acc += beta.sizes()[b++];
    if (acc != target) return false;
  }
  return b == beta.sizes().size();
}

Partition uniform_partition(int dimension, int blocks) {
  if (blocks < 1) throw Error("uniform_partition: block count must be positive");
  if (blocks > dimension)
    throw Error("uniform_partition: block count " + std::to_string(blocks) +
                " exceeds dimension " + std::to_string(dimension));
  const int small = dimension / blocks;
  const int large_count = dimension % blocks;
  std::vector<int> sizes;
  sizes.reserve(static_cast<size_t>(blocks));
  sizes.insert(sizes.end(), static_cast<size_t>(blocks - large_count), small);
  sizes.insert(sizes.end(), static_cast<size_t>(large_count), small + 1);
  return Partition(std::move(sizes));
}

std::vector<PairRange> pair_ranges(const Partition& alpha) {
  const int p = alpha.block_count();
  std::vector<PairRange> out;
  out.reserve(static_cast<size_t>(p) * (p - 1) / 2);
  for (int i = 1; i < p; ++i)
    for (int j = i + 1; j <= p; ++j) out.push_back(pair_range(alpha, i, j));
  return out;
}

PairRange pair_range(const Partition& alpha, int i, int j) {
  if (i < 1 || j <= i || j > alpha.block_count())
    throw Error("pair index (" + std::to_string(i) + "," + std::to_string(j) +
                ") out of range for partition with " +
                std::to_string(alpha.block_count()) + " blocks");
  PairRange r;
  r.i = i;
  r.j = j;
  r.off_i = alpha.offset(i);
  r.len_i = alpha.block_size(i);
  r.off_j = alpha.offset(j);
  r.len_j = alpha.block_size(j);
  return r;
}

}  // namespace fwsdp
