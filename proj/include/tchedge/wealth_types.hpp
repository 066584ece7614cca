#pragma once

#include "tchedge/rational.hpp"

#include <vector>

namespace tchedge {

/// One period's transfer increments: entry (i,j) is the amount credited to
/// account j out of account i (before costs). Non-negative, zero diagonal.
class TransferMatrix {
 public:
  explicit TransferMatrix(int dim) : dim_(dim), entries_(static_cast<size_t>(dim) * dim, Rat(0)) {}

  int dim() const { return dim_; }
  const Rat& at(int i, int j) const { return entries_[static_cast<size_t>(i) * dim_ + j]; }
  Rat& at(int i, int j) { return entries_[static_cast<size_t>(i) * dim_ + j]; }
  bool is_zero() const {
    for (const Rat& r : entries_)
      if (r != 0) return false;
    return true;
  }
  bool operator==(const TransferMatrix&) const = default;

 private:
  int dim_;
  std::vector<Rat> entries_;
};

}  // namespace tchedge
