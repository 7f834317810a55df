#include "varseq/divergence.hpp"

#include <map>

#include "ranking.hpp"
#include "sparse_solve.hpp"
#include "varseq/errors.hpp"

namespace varseq {

namespace {

// Antiderivative with respect to one variable, term by term.
Expr integrate(const Expr& e, const JetVariable& v) {
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    const int p = m.power_of(v);
    out.add_term(m * Monomial(v), c / (p + 1));
  }
  return out;
}

bool verify(const Expr& L, const std::vector<Expr>& b) {
  Expr sum;
  for (std::size_t i = 0; i < b.size(); ++i) sum += total_derivative(b[i], static_cast<int>(i) + 1);
  return sum == L;
}

// Highest-derivative elimination. Returns the unresolved remainder.
Expr eliminate(const JetContext& ctx, Expr remaining, std::vector<Expr>& b) {
  for (int guard = 0; guard < 100000 && !remaining.is_zero(); ++guard) {
    auto top = detail::leading_fiber_variable(remaining);
    if (!top) {
      const JetVariable x1 = JetVariable::base(1);
      b[0] += integrate(remaining, x1);
      return Expr();
    }
    if (top->multi.empty() || remaining.degree_in(*top) != 1) return remaining;
    const Expr a1 = remaining.coefficient(*top, 1);
    bool progressed = false;
    for (int i = 1; i <= ctx.n() && !progressed; ++i) {
      if (top->multi.count(i) == 0) continue;
      const JetVariable lower = JetVariable::fiber(top->index, top->multi.without(i));
      const Expr F = integrate(a1, lower);
      Expr candidate = remaining - total_derivative(F, i);
      auto next = detail::leading_fiber_variable(candidate);
      if (!next || detail::rank_less(*next, *top)) {
        b[static_cast<std::size_t>(i) - 1] += F;
        remaining = std::move(candidate);
        progressed = true;
      }
    }
    if (!progressed) return remaining;
  }
  return remaining;
}

// All monomials of total degree <= degree in the given variables.
std::vector<Monomial> monomials_up_to(const std::vector<JetVariable>& vars, int degree) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<Monomial> frontier{Monomial{}};
  std::vector<std::size_t> frontier_start{0};  // smallest variable index allowed next
  for (int d = 1; d <= degree; ++d) {
    std::vector<Monomial> next;
    std::vector<std::size_t> next_start;
    for (std::size_t f = 0; f < frontier.size(); ++f) {
      for (std::size_t k = frontier_start[f]; k < vars.size(); ++k) {
        next.push_back(frontier[f] * Monomial(vars[k]));
        next_start.push_back(k);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
    frontier_start = std::move(next_start);
  }
  return out;
}

std::optional<std::vector<Expr>> linear_ansatz(const JetContext& ctx, const Expr& L, int order, int degree) {
  std::vector<JetVariable> vars;
  for (int i = 1; i <= ctx.n(); ++i) vars.push_back(JetVariable::base(i));
  for (int a = 1; a <= ctx.m(); ++a) {
    for (const MultiIndex& I : MultiIndex::all_up_to(ctx.n(), order)) vars.push_back(JetVariable::fiber(a, I));
  }
  const std::vector<Monomial> basis = monomials_up_to(vars, degree);
  const int n = ctx.n();
  const int unknowns = n * static_cast<int>(basis.size());

  std::map<Monomial, int> row_of;
  std::vector<detail::SparseRow> rows;
  auto row_index = [&](const Monomial& m) {
    auto [it, inserted] = row_of.try_emplace(m, static_cast<int>(rows.size()));
    if (inserted) rows.emplace_back();
    return it->second;
  };
  for (int i = 1; i <= n; ++i) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const int col = (i - 1) * static_cast<int>(basis.size()) + static_cast<int>(k);
      Expr m;
      m.add_term(basis[k], Rational(1));
      const Expr image = total_derivative(m, i);
      for (const auto& [mono, c] : image.terms()) rows[static_cast<std::size_t>(row_index(mono))][col] += c;
    }
  }
  for (const auto& [mono, c] : L.terms()) row_index(mono);
  std::vector<Rational> rhs(rows.size(), Rational(0));
  for (const auto& [mono, c] : L.terms()) rhs[static_cast<std::size_t>(row_of.at(mono))] = c;

  auto x = detail::solve_sparse(std::move(rows), std::move(rhs), unknowns);
  if (!x) return std::nullopt;
  std::vector<Expr> b(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Rational& c = (*x)[static_cast<std::size_t>((i - 1) * static_cast<int>(basis.size())) + k];
      if (c != 0) b[static_cast<std::size_t>(i) - 1].add_term(basis[k], c);
    }
  }
  return b;
}

}  // namespace

std::optional<std::vector<Expr>> invert_total_divergence(const JetContext& ctx, const Expr& L) {
  std::vector<Expr> b(static_cast<std::size_t>(ctx.n()));
  if (L.is_zero()) return b;
  Expr remaining = eliminate(ctx, L, b);
  if (!remaining.is_zero()) {
    const int s = remaining.order();
    const int degree = remaining.total_degree() + 1;
    std::optional<std::vector<Expr>> extra;
    for (int order = std::max(s - 1, 0); order <= s && !extra; ++order) {
      extra = linear_ansatz(ctx, remaining, order, degree);
    }
    if (!extra) return std::nullopt;
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += (*extra)[i];
  }
  if (!verify(L, b)) throw InternalError("divergence inversion failed verification");
  return b;
}

}  // namespace varseq
