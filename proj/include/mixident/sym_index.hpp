#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mixident {

/// Default ceiling on dense tensor storage; past it callers must use the
/// compressed layout.
inline constexpr std::size_t kDenseEntryCap = 10'000'000;

/// dim^order, or SIZE_MAX when it exceeds `cap`.
std::size_t dense_size(int dim, int order, std::size_t cap = kDenseEntryCap);

/// Index bookkeeping for order-n symmetric tensors over d atoms. Classes are
/// the multisets of n atoms (monomials of degree n in d variables), listed in
/// lexicographic order of the sorted tuple; class_mult holds the multinomial
/// multiplicity, i.e. how many dense positions collapse onto the class.
class SymIndexTable {
 public:
  SymIndexTable(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  int n_classes() const { return static_cast<int>(counts_.size()); }

  /// Per-atom exponent vector of a class (size dim, entries sum to order).
  const std::vector<int>& counts(int cls) const {
    return counts_[static_cast<std::size_t>(cls)];
  }
  std::uint64_t multiplicity(int cls) const {
    return mult_[static_cast<std::size_t>(cls)];
  }
  int class_of_counts(const std::vector<int>& c) const;

  /// "i1.i2...in" with i1 <= ... <= in; empty string at order 0.
  std::string key(int cls) const;
  /// Inverse of key(); -1 when the key names no class.
  int class_of_key(const std::string& key) const;

  /// Sorted-tuple form of a class (length order).
  std::vector<int> sorted_tuple(int cls) const;

  /// Class of each dense flat index (size dim^order). Only available when the
  /// dense size fits the entry cap; built once at construction so shared
  /// tables stay immutable.
  const std::vector<int>& dense_to_class() const;

 private:
  int dim_;
  int order_;
  std::vector<std::vector<int>> counts_;
  std::vector<std::uint64_t> mult_;
  std::map<std::vector<int>, int> lookup_;
  std::vector<int> dense_to_class_;
  bool has_dense_map_ = false;
};

/// Shared, thread-safe table cache.
const SymIndexTable& sym_index_table(int dim, int order);

/// Number of multisets C(dim+order-1, order).
std::size_t n_multisets(int dim, int order);

/// Row-major flat index of a digit tuple.
std::size_t dense_rank(const std::vector<int>& tuple, int dim);

/// Digits of a row-major flat index (length order).
std::vector<int> dense_unrank(std::size_t flat, int dim, int order);

/// Binomial coefficient in exact 64-bit arithmetic; throws on overflow.
std::uint64_t binomial(int n, int k);

}  // namespace mixident
