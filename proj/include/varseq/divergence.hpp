#pragma once

#include <optional>
#include <vector>

#include "varseq/expr.hpp"

namespace varseq {

/// Finds b_1..b_n with sum_i D_i b_i = L. Tries highest-derivative
/// elimination first and falls back to an exact linear solve over a bounded
/// polynomial ansatz. Returns nullopt when neither succeeds; a returned
/// solution is always verified.
std::optional<std::vector<Expr>> invert_total_divergence(const JetContext& ctx, const Expr& L);

}  // namespace varseq
