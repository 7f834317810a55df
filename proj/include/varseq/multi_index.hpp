#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace varseq {

/// Largest supported base dimension.
inline constexpr int kMaxBaseDim = 8;

/// Symmetric multi-index over base directions 1..n, stored as per-direction
/// counts so that permuted indices are the same value.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex from_entries(std::span<const int> entries);

  int order() const;
  int count(int direction) const { return counts_[direction - 1]; }
  bool empty() const { return order() == 0; }

  /// Entries in ascending order (the canonical representative).
  std::vector<int> entries() const;
  int last() const;   // largest entry; requires !empty()

  MultiIndex with(int direction) const;        // I.i
  MultiIndex without(int direction) const;     // requires count(direction) > 0
  MultiIndex operator+(const MultiIndex& other) const;  // concatenation
  bool contains(const MultiIndex& other) const;         // multiset inclusion
  MultiIndex minus(const MultiIndex& other) const;      // requires contains

  /// Number of ordered sequences with this multiset of entries.
  std::uint64_t multiplicity() const;

  /// All multi-indices of exactly the given order over n directions.
  static std::vector<MultiIndex> all_of_order(int n, int order);
  /// All multi-indices of order <= max_order, by increasing order.
  static std::vector<MultiIndex> all_up_to(int n, int max_order);

  /// Lexicographic on the sorted entries.
  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const { return counts_ == other.counts_; }

  const std::array<std::uint8_t, kMaxBaseDim>& counts() const { return counts_; }

 private:
  std::array<std::uint8_t, kMaxBaseDim> counts_{};
};

}  // namespace varseq
