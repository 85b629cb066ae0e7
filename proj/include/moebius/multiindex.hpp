#pragma once

#include <memory>
#include <vector>

namespace moebius {

// Table of all multi-indices alpha with |alpha| <= order in `dim` variables,
// sorted by total degree and lexicographically within a degree. Shared by
// every jet over the same chart; instances are cached and immutable.
class MultiIndexTable {
 public:
  struct Pair {
    int a, b, target;  // coefficient slots with index(a) + index(b) = index(target)
  };

  MultiIndexTable(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }

  const std::vector<int>& index(int i) const { return indices_[i]; }
  int degree(int i) const { return degrees_[i]; }
  double factorial(int i) const { return factorials_[i]; }  // alpha!

  // Slot of alpha, or -1 if |alpha| > order.
  int find(const std::vector<int>& alpha) const;

  // Slot of alpha + e_var, or -1 if that leaves the table.
  int raise(int i, int var) const { return raise_[i * dim_ + var]; }

  // All ordered coefficient pairs contributing to a truncated product,
  // sorted by deg(a) + deg(b).
  const std::vector<Pair>& pairs() const { return pairs_; }
  // One past the last pair with deg(a) + deg(b) <= d.
  int pairs_end(int d) const { return pairs_end_[d]; }

  // First slot of the given total degree.
  int degree_begin(int d) const { return degree_begin_[d]; }

  static std::shared_ptr<const MultiIndexTable> get(int dim, int order);

 private:
  int dim_, order_;
  std::vector<std::vector<int>> indices_;
  std::vector<int> degrees_;
  std::vector<double> factorials_;
  std::vector<int> raise_;
  std::vector<Pair> pairs_;
  std::vector<int> pairs_end_;
  std::vector<int> degree_begin_;
};

}  // namespace moebius
