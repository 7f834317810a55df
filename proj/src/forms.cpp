#include "varseq/forms.hpp"

#include <algorithm>
#include <utility>

#include "varseq/errors.hpp"

namespace varseq {

namespace {

using LinearCombination = std::vector<std::pair<Covector, Expr>>;

void require_same_context(const DiffForm& a, const DiffForm& b) {
  if (!(*a.context() == *b.context())) throw DomainError("context mismatch");
}

// Multiplies out a wedge monomial whose factors are replaced by linear
// combinations of covectors; accumulates c * (expansion) into `out`.
void expand_product(const std::vector<LinearCombination>& factors, const Expr& c,
                    DiffForm& out) {
  std::vector<std::pair<Wedge, Expr>> partial{{Wedge{}, c}};
  for (const LinearCombination& factor : factors) {
    std::vector<std::pair<Wedge, Expr>> next;
    next.reserve(partial.size() * factor.size());
    for (const auto& [w, e] : partial) {
      for (const auto& [cov, coef] : factor) {
        if (std::find(w.begin(), w.end(), cov) != w.end()) continue;
        Wedge extended = w;
        extended.push_back(cov);
        next.emplace_back(std::move(extended), e * coef);
      }
    }
    partial = std::move(next);
  }
  for (const auto& [w, e] : partial) out.add_term(w, e);
}

}  // namespace

int canonical_sign(Wedge& covectors) {
  int sign = 1;
  for (std::size_t i = 1; i < covectors.size(); ++i) {
    for (std::size_t j = i; j > 0; --j) {
      auto cmp = covectors[j - 1] <=> covectors[j];
      if (cmp == 0) return 0;
      if (cmp < 0) break;
      std::swap(covectors[j - 1], covectors[j]);
      sign = -sign;
    }
  }
  return sign;
}

// ------------------------------------------------------------------ DiffForm

DiffForm::DiffForm(ContextPtr ctx, int order, int degree)
    : ctx_(std::move(ctx)), order_(order), degree_(degree) {
  if (!ctx_) throw DomainError("form without context");
  if (order < 0 || degree < 0) throw DomainError("negative form order or degree");
}

DiffForm DiffForm::function(ContextPtr ctx, int order, const Expr& f) {
  DiffForm out(std::move(ctx), order, 0);
  out.add_term({}, f);
  return out;
}

DiffForm DiffForm::dx(ContextPtr ctx, int order, int i) {
  DiffForm out(std::move(ctx), order, 1);
  out.add_term({Covector::dx(i)}, Expr(1));
  return out;
}

DiffForm DiffForm::contact(ContextPtr ctx, int order, int alpha, const MultiIndex& I) {
  DiffForm out(std::move(ctx), order, 1);
  out.add_term({Covector::contact(alpha, I)}, Expr(1));
  return out;
}

DiffForm DiffForm::dy(ContextPtr ctx, int order, int alpha, const MultiIndex& I) {
  if (I.order() > order) throw DomainError("dy above the hosting order");
  DiffForm out(ctx, order, 1);
  if (I.order() == order) {
    out.add_term({Covector::dy_top(alpha, I)}, Expr(1));
    return out;
  }
  out.add_term({Covector::contact(alpha, I)}, Expr(1));
  for (int j = 1; j <= ctx->n(); ++j) {
    out.add_term({Covector::dx(j)}, Expr::fiber(alpha, I.with(j)));
  }
  return out;
}

DiffForm DiffForm::omega0(ContextPtr ctx, int order) {
  DiffForm out(ctx, order, ctx->n());
  Wedge w;
  for (int i = 1; i <= ctx->n(); ++i) w.push_back(Covector::dx(i));
  out.add_term(w, Expr(1));
  return out;
}

DiffForm DiffForm::omega_i(ContextPtr ctx, int order, int i) {
  return contract(omega0(ctx, order), [i](const Covector& c) {
    return Expr(c.kind == Covector::Kind::Dx && c.index == i ? 1 : 0);
  });
}

DiffForm DiffForm::omega_ij(ContextPtr ctx, int order, int i, int j) {
  return contract(omega_i(std::move(ctx), order, i), [j](const Covector& c) {
    return Expr(c.kind == Covector::Kind::Dx && c.index == j ? 1 : 0);
  });
}

Expr DiffForm::coefficient(const Wedge& w) const {
  Wedge sorted = w;
  int sign = canonical_sign(sorted);
  if (sign == 0) return Expr();
  auto it = terms_.find(sorted);
  if (it == terms_.end()) return Expr();
  return sign > 0 ? it->second : -it->second;
}

Expr DiffForm::as_function() const {
  if (degree_ != 0) throw DomainError("not a 0-form");
  return coefficient({});
}

bool DiffForm::has_top_covectors() const {
  for (const auto& [w, c] : terms_) {
    for (const Covector& cov : w) {
      if (cov.kind == Covector::Kind::DyTop) return true;
    }
  }
  return false;
}

int DiffForm::max_contact_degree() const {
  int best = -1;
  for (const auto& [w, c] : terms_) {
    int k = static_cast<int>(std::count_if(w.begin(), w.end(),
                                           [](const Covector& cov) { return !cov.is_horizontal(); }));
    best = std::max(best, k);
  }
  return best;
}

int DiffForm::coefficient_order() const {
  int best = -1;
  for (const auto& [w, c] : terms_) best = std::max(best, c.order());
  return best;
}

void DiffForm::check_covector(const Covector& c) const {
  const int n = ctx_->n();
  switch (c.kind) {
    case Covector::Kind::Dx:
      if (c.index < 1 || c.index > n) throw DomainError("dx index out of range");
      return;
    case Covector::Kind::Contact:
    case Covector::Kind::DyTop:
      if (c.index < 1 || c.index > ctx_->m()) throw DomainError("fiber index out of range");
      if (!JetVariable::fiber(c.index, c.multi).valid_in(*ctx_)) {
        throw DomainError("multi-index direction out of range");
      }
      if (c.kind == Covector::Kind::Contact && c.multi.order() > order_ - 1) {
        throw DomainError("contact form above the hosting order");
      }
      if (c.kind == Covector::Kind::DyTop && c.multi.order() != order_) {
        throw DomainError("top-order differential at the wrong order");
      }
      return;
  }
}

void DiffForm::add_term(const Wedge& covectors, const Expr& c) {
  if (!ctx_) throw DomainError("form without context");
  if (static_cast<int>(covectors.size()) != degree_) throw DomainError("form degree mismatch");
  if (c.is_zero()) return;
  if (c.order() > order_) throw DomainError("coefficient above the hosting order");
  Wedge sorted = covectors;
  int sign = canonical_sign(sorted);
  if (sign == 0) return;
  for (const Covector& cov : sorted) check_covector(cov);
  auto [it, inserted] = terms_.try_emplace(sorted, sign > 0 ? c : -c);
  if (!inserted) {
    if (sign > 0) {
      it->second += c;
    } else {
      it->second -= c;
    }
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffForm DiffForm::operator-() const {
  DiffForm out = *this;
  for (auto& [w, c] : out.terms_) c = -c;
  return out;
}

DiffForm& DiffForm::operator+=(const DiffForm& other) {
  if (!other.typed()) return *this;
  if (!typed()) return *this = other;
  require_same_context(*this, other);
  if (degree_ != other.degree_) throw DomainError("adding forms of different degree");
  if (other.order_ > order_) *this = pullback(*this, other.order_);
  const DiffForm& rhs = other.order_ < order_ ? pullback(other, order_) : other;
  for (const auto& [w, c] : rhs.terms_) {
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& other) { return *this += -other; }

DiffForm operator*(const Expr& f, const DiffForm& a) {
  if (!a.typed()) return a;
  DiffForm base = f.order() > a.order() ? pullback(a, f.order()) : a;
  DiffForm out(base.ctx_, base.order_, base.degree_);
  if (f.is_zero()) return out;
  for (const auto& [w, c] : base.terms_) {
    Expr product = f * c;
    if (!product.is_zero()) out.terms_.emplace(w, std::move(product));
  }
  return out;
}

bool DiffForm::operator==(const DiffForm& other) const {
  if (!typed() || !other.typed() || is_zero() || other.is_zero()) {
    return is_zero() && other.is_zero();
  }
  if (!(*ctx_ == *other.ctx_) || degree_ != other.degree_) return false;
  if (order_ == other.order_) return terms_ == other.terms_;
  int s = std::max(order_, other.order_);
  return pullback(*this, s).terms_ == pullback(other, s).terms_;
}

DiffForm DiffForm::map_coefficients(const std::function<Expr(const Expr&)>& fn) const {
  if (!typed()) return *this;
  std::vector<std::pair<Wedge, Expr>> mapped;
  int needed = order_;
  for (const auto& [w, c] : terms_) {
    Expr e = fn(c);
    needed = std::max(needed, e.order());
    mapped.emplace_back(w, std::move(e));
  }
  if (needed > order_ && has_top_covectors()) return pullback(*this, needed).map_coefficients(fn);
  DiffForm out(ctx_, needed, degree_);
  for (auto& [w, e] : mapped) {
    if (!e.is_zero()) out.terms_.emplace(w, std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------- operations

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  if (!a.typed()) return a;
  if (!b.typed()) return b;
  require_same_context(a, b);
  int s = std::max(a.order(), b.order());
  const DiffForm lhs = a.order() < s ? pullback(a, s) : a;
  const DiffForm rhs = b.order() < s ? pullback(b, s) : b;
  DiffForm out(a.context(), s, a.degree() + b.degree());
  for (const auto& [wa, ca] : lhs.terms()) {
    for (const auto& [wb, cb] : rhs.terms()) {
      Wedge w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out.add_term(w, ca * cb);
    }
  }
  return out;
}

DiffForm pullback(const DiffForm& rho, int s) {
  if (!rho.typed() || s == rho.order()) return rho;
  if (s < rho.order()) throw DomainError("pullback below the current order");
  DiffForm out(rho.context(), s, rho.degree());
  const int n = rho.context()->n();
  for (const auto& [w, c] : rho.terms()) {
    std::vector<LinearCombination> factors;
    factors.reserve(w.size());
    for (const Covector& cov : w) {
      if (cov.kind != Covector::Kind::DyTop) {
        factors.push_back({{cov, Expr(1)}});
        continue;
      }
      LinearCombination lc{{Covector::contact(cov.index, cov.multi), Expr(1)}};
      for (int j = 1; j <= n; ++j) {
        lc.emplace_back(Covector::dx(j), Expr::fiber(cov.index, cov.multi.with(j)));
      }
      factors.push_back(std::move(lc));
    }
    expand_product(factors, c, out);
  }
  return out;
}

DiffForm exterior_differential(const DiffForm& rho) {
  if (!rho.typed()) return rho;
  const ContextPtr& ctx = rho.context();
  const int s = rho.order();
  const int n = ctx->n();
  DiffForm out(ctx, s, rho.degree() + 1);

  auto differential_of = [&](int alpha, const MultiIndex& I) -> LinearCombination {
    if (I.order() == s) return {{Covector::dy_top(alpha, I), Expr(1)}};
    LinearCombination lc{{Covector::contact(alpha, I), Expr(1)}};
    for (int j = 1; j <= n; ++j) lc.emplace_back(Covector::dx(j), Expr::fiber(alpha, I.with(j)));
    return lc;
  };

  for (const auto& [w, c] : rho.terms()) {
    // d(coefficient) ^ w
    for (const JetVariable& v : c.variables()) {
      Expr partial = partial_derivative(c, v);
      if (v.is_base()) {
        Wedge term{Covector::dx(v.index)};
        term.insert(term.end(), w.begin(), w.end());
        out.add_term(term, partial);
        continue;
      }
      for (const auto& [cov, coef] : differential_of(v.index, v.multi)) {
        if (std::find(w.begin(), w.end(), cov) != w.end()) continue;
        Wedge term{cov};
        term.insert(term.end(), w.begin(), w.end());
        out.add_term(term, partial * coef);
      }
    }
    // c * sum (-1)^k w_1 ^ ... ^ d w_k ^ ... ; d omega_I = dx^j ^ dy_{Ij}
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k].kind != Covector::Kind::Contact) continue;
      Expr signed_c = (k % 2 == 0) ? c : -c;
      for (int j = 1; j <= n; ++j) {
        MultiIndex Ij = w[k].multi.with(j);
        Covector raised = Ij.order() == s ? Covector::dy_top(w[k].index, Ij)
                                          : Covector::contact(w[k].index, Ij);
        Wedge term(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
        term.push_back(Covector::dx(j));
        term.push_back(raised);
        term.insert(term.end(), w.begin() + static_cast<std::ptrdiff_t>(k) + 1, w.end());
        out.add_term(term, signed_c);
      }
    }
  }
  return out;
}

std::vector<DiffForm> contact_split(const DiffForm& rho) {
  if (!rho.typed()) return {rho};
  DiffForm lifted = pullback(rho, rho.order() + 1);
  std::vector<DiffForm> parts(rho.degree() + 1,
                              DiffForm(rho.context(), lifted.order(), rho.degree()));
  for (const auto& [w, c] : lifted.terms()) {
    auto k = std::count_if(w.begin(), w.end(), [](const Covector& cov) { return !cov.is_horizontal(); });
    parts[static_cast<std::size_t>(k)].add_term(w, c);
  }
  return parts;
}

DiffForm contact_component(const DiffForm& rho, int i) {
  if (!rho.typed()) return rho;
  if (i < 0 || i > rho.degree()) return DiffForm(rho.context(), rho.order() + 1, rho.degree());
  return contact_split(rho)[static_cast<std::size_t>(i)];
}

DiffForm horizontalize(const DiffForm& rho) { return contact_component(rho, 0); }

DiffForm horizontal_differential(const DiffForm& rho) {
  if (!rho.typed()) return rho;
  DiffForm out(rho.context(), rho.order() + 2, rho.degree() + 1);
  std::vector<DiffForm> parts = contact_split(rho);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].is_zero()) continue;
    out += contact_split(exterior_differential(parts[i]))[i];
  }
  return out;
}

DiffForm vertical_differential(const DiffForm& rho) {
  if (!rho.typed()) return rho;
  DiffForm out(rho.context(), rho.order() + 2, rho.degree() + 1);
  std::vector<DiffForm> parts = contact_split(rho);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].is_zero()) continue;
    out += contact_split(exterior_differential(parts[i]))[i + 1];
  }
  return out;
}

DiffForm total_derivative(const DiffForm& rho, int i) {
  if (!rho.typed()) return rho;
  const DiffForm base = rho.has_top_covectors() ? pullback(rho, rho.order() + 1) : rho;
  DiffForm out(rho.context(), base.order() + 1, rho.degree());
  for (const auto& [w, c] : base.terms()) {
    out.add_term(w, total_derivative(c, i));
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (w[k].kind != Covector::Kind::Contact) continue;
      Wedge raised = w;
      raised[k] = Covector::contact(w[k].index, w[k].multi.with(i));
      out.add_term(raised, c);
    }
  }
  return out;
}

DiffForm total_derivative(const DiffForm& rho, const MultiIndex& J) {
  DiffForm out = rho;
  for (int i : J.entries()) out = total_derivative(out, i);
  return out;
}

DiffForm contract(const DiffForm& rho, const std::function<Expr(const Covector&)>& value) {
  if (!rho.typed()) return rho;
  if (rho.degree() == 0) throw DomainError("interior product of a 0-form");
  const DiffForm base = rho.has_top_covectors() ? pullback(rho, rho.order() + 1) : rho;
  std::map<Covector, Expr> cache;
  auto value_of = [&](const Covector& c) -> const Expr& {
    auto it = cache.find(c);
    if (it == cache.end()) it = cache.emplace(c, value(c)).first;
    return it->second;
  };
  std::vector<std::pair<Wedge, Expr>> pieces;
  int needed = base.order();
  for (const auto& [w, c] : base.terms()) {
    for (std::size_t k = 0; k < w.size(); ++k) {
      const Expr& v = value_of(w[k]);
      if (v.is_zero()) continue;
      Wedge rest = w;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
      Expr coef = v * c;
      if (k % 2 == 1) coef = -coef;
      needed = std::max(needed, coef.order());
      pieces.emplace_back(std::move(rest), std::move(coef));
    }
  }
  DiffForm out(rho.context(), needed, rho.degree() - 1);
  for (const auto& [w, c] : pieces) out.add_term(w, c);
  return out;
}

}  // namespace varseq
