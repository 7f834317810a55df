#pragma once

// Exact solution of sparse linear systems over the rationals by
// row-echelon elimination. Internal helper.

#include <map>
#include <optional>
#include <vector>

#include "varseq/rational.hpp"

namespace varseq::detail {

using SparseRow = std::map<int, Rational>;

/// Solves rows[r] . x = rhs[r]; free unknowns are set to zero. Returns
/// nullopt when the system is inconsistent.
std::optional<std::vector<Rational>> solve_sparse(std::vector<SparseRow> rows, std::vector<Rational> rhs,
                                                  int unknowns);

}  // namespace varseq::detail
