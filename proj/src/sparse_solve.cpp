#include "sparse_solve.hpp"

#include <utility>

namespace varseq::detail {

namespace {

void axpy(SparseRow& target, Rational& target_rhs, const SparseRow& row, const Rational& row_rhs,
          const Rational& factor) {
  for (const auto& [col, value] : row) {
    auto [it, inserted] = target.try_emplace(col, 0);
    it->second -= factor * value;
    if (it->second == 0) target.erase(it);
  }
  target_rhs -= factor * row_rhs;
}

}  // namespace

std::optional<std::vector<Rational>> solve_sparse(std::vector<SparseRow> rows, std::vector<Rational> rhs,
                                                  int unknowns) {
  // Pivot rows keyed by their leading column, each normalized to lead 1.
  std::map<int, std::pair<SparseRow, Rational>> pivots;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    SparseRow row = std::move(rows[r]);
    Rational b = rhs[r];
    while (!row.empty()) {
      auto lead = row.begin();
      auto pivot = pivots.find(lead->first);
      if (pivot == pivots.end()) break;
      Rational factor = lead->second;
      axpy(row, b, pivot->second.first, pivot->second.second, factor);
    }
    if (row.empty()) {
      if (b != 0) return std::nullopt;
      continue;
    }
    Rational lead_value = row.begin()->second;
    for (auto& [col, value] : row) value /= lead_value;
    b /= lead_value;
    int col = row.begin()->first;
    pivots.emplace(col, std::make_pair(std::move(row), std::move(b)));
  }

  std::vector<Rational> x(static_cast<std::size_t>(unknowns), Rational(0));
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    const auto& [row, b] = it->second;
    Rational value = b;
    for (const auto& [col, coef] : row) {
      if (col != it->first) value -= coef * x[static_cast<std::size_t>(col)];
    }
    x[static_cast<std::size_t>(it->first)] = value;
  }
  return x;
}

}  // namespace varseq::detail
