#pragma once

// Orderly ranking of jet variables: base variables first, then fiber
// derivatives by order, then by the count vector, then by component.
// Total derivatives preserve it, which is what the eliminations rely on.

#include <optional>

#include "varseq/expr.hpp"

namespace varseq::detail {

inline bool rank_less(const JetVariable& a, const JetVariable& b) {
  if (a.is_base() != b.is_base()) return a.is_base();
  if (a.is_base()) return a.index < b.index;
  if (a.order() != b.order()) return a.order() < b.order();
  if (a.multi.counts() != b.multi.counts()) return a.multi.counts() < b.multi.counts();
  return a.index < b.index;
}

/// Highest-ranked fiber variable of e, if any.
inline std::optional<JetVariable> leading_fiber_variable(const Expr& e) {
  std::optional<JetVariable> best;
  for (const JetVariable& v : e.variables()) {
    if (v.is_fiber() && (!best || rank_less(*best, v))) best = v;
  }
  return best;
}

}  // namespace varseq::detail
