#include "varseq/multi_index.hpp"

#include <algorithm>
#include <numeric>

#include "varseq/errors.hpp"

namespace varseq {

namespace {

void check_direction(int d) {
  if (d < 1 || d > kMaxBaseDim) {
    throw DomainError("multi-index entry " + std::to_string(d) + " out of range");
  }
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> entries) {
  for (int e : entries) {
    check_direction(e);
    ++counts_[e - 1];
  }
}

MultiIndex MultiIndex::from_entries(std::span<const int> entries) {
  MultiIndex out;
  for (int e : entries) {
    check_direction(e);
    ++out.counts_[e - 1];
  }
  return out;
}

int MultiIndex::order() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

std::vector<int> MultiIndex::entries() const {
  std::vector<int> out;
  for (int d = 0; d < kMaxBaseDim; ++d) {
    out.insert(out.end(), counts_[d], d + 1);
  }
  return out;
}

int MultiIndex::last() const {
  for (int d = kMaxBaseDim - 1; d >= 0; --d) {
    if (counts_[d] > 0) return d + 1;
  }
  throw DomainError("last() of the empty multi-index");
}

MultiIndex MultiIndex::with(int direction) const {
  check_direction(direction);
  MultiIndex out = *this;
  ++out.counts_[direction - 1];
  return out;
}

MultiIndex MultiIndex::without(int direction) const {
  check_direction(direction);
  if (counts_[direction - 1] == 0) {
    throw DomainError("multi-index does not contain direction " + std::to_string(direction));
  }
  MultiIndex out = *this;
  --out.counts_[direction - 1];
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  MultiIndex out = *this;
  for (int d = 0; d < kMaxBaseDim; ++d) out.counts_[d] += other.counts_[d];
  return out;
}

bool MultiIndex::contains(const MultiIndex& other) const {
  for (int d = 0; d < kMaxBaseDim; ++d) {
    if (counts_[d] < other.counts_[d]) return false;
  }
  return true;
}

MultiIndex MultiIndex::minus(const MultiIndex& other) const {
  if (!contains(other)) throw DomainError("multi-index difference is not defined");
  MultiIndex out = *this;
  for (int d = 0; d < kMaxBaseDim; ++d) out.counts_[d] -= other.counts_[d];
  return out;
}

std::uint64_t MultiIndex::multiplicity() const {
  // |I|! / prod c_d!, built as a product of binomials to stay exact.
  std::uint64_t result = 1;
  int placed = 0;
  for (int d = 0; d < kMaxBaseDim; ++d) {
    for (int k = 1; k <= counts_[d]; ++k) {
      ++placed;
      result = result * placed / k;
    }
  }
  return result;
}

std::vector<MultiIndex> MultiIndex::all_of_order(int n, int order) {
  std::vector<MultiIndex> out;
  if (order == 0) {
    out.emplace_back();
    return out;
  }
  for (const MultiIndex& shorter : all_of_order(n, order - 1)) {
    // Extend only with directions >= the current last one: each multiset once.
    int start = shorter.empty() ? 1 : shorter.last();
    for (int d = start; d <= n; ++d) out.push_back(shorter.with(d));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<MultiIndex> MultiIndex::all_up_to(int n, int max_order) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= max_order; ++k) {
    auto level = all_of_order(n, k);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  // Walk both sorted entry sequences in lockstep.
  int da = 0, db = 0;
  int ra = counts_[0], rb = other.counts_[0];
  auto advance = [](const auto& counts, int& d, int& remaining) {
    while (remaining == 0 && d + 1 < kMaxBaseDim) remaining = counts[++d];
  };
  advance(counts_, da, ra);
  advance(other.counts_, db, rb);
  while (true) {
    bool end_a = ra == 0;
    bool end_b = rb == 0;
    if (end_a || end_b) return end_b <=> end_a;  // shorter prefix is smaller
    if (da != db) return da <=> db;
    --ra;
    --rb;
    advance(counts_, da, ra);
    advance(other.counts_, db, rb);
  }
}

}  // namespace varseq
