#include "varseq/expr.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "varseq/errors.hpp"

namespace varseq {

bool JetVariable::valid_in(const JetContext& ctx) const {
  if (is_base()) return index >= 1 && index <= ctx.n();
  if (index < 1 || index > ctx.m()) return false;
  for (int d = ctx.n() + 1; d <= kMaxBaseDim; ++d) {
    if (multi.count(d) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(const JetVariable& v, int power) {
  if (power > 0) factors_.emplace_back(v, power);
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& [v, p] : factors_) d += p;
  return d;
}

int Monomial::power_of(const JetVariable& v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const Factor& f, const JetVariable& x) { return f.first < x; });
  return (it != factors_.end() && it->first == v) ? it->second : 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first < b->first) {
      out.factors_.push_back(*a++);
    } else if (b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  out.factors_.insert(out.factors_.end(), a, factors_.end());
  out.factors_.insert(out.factors_.end(), b, other.factors_.end());
  return out;
}

Monomial Monomial::reduced(const JetVariable& v) const {
  Monomial out = *this;
  for (auto it = out.factors_.begin(); it != out.factors_.end(); ++it) {
    if (it->first == v) {
      if (--it->second == 0) out.factors_.erase(it);
      return out;
    }
  }
  throw InternalError("Monomial::reduced: variable not present");
}

Monomial Monomial::without(const JetVariable& v) const {
  Monomial out = *this;
  std::erase_if(out.factors_, [&](const Factor& f) { return f.first == v; });
  return out;
}

// -------------------------------------------------------------------- Expr

Expr::Expr(long value) {
  if (value != 0) terms_.emplace(Monomial{}, Rational(value));
}

Expr::Expr(const Rational& value) {
  if (value != 0) terms_.emplace(Monomial{}, value);
}

Expr Expr::variable(const JetVariable& v) {
  Expr e;
  e.terms_.emplace(Monomial(v), Rational(1));
  return e;
}

bool Expr::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Expr::constant_value() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

void Expr::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Expr Expr::operator-() const {
  Expr out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

Expr& Expr::operator+=(const Expr& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Expr& Expr::operator-=(const Expr& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Expr operator*(const Expr& a, const Expr& b) {
  Expr out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

Expr& Expr::operator*=(const Expr& other) { return *this = *this * other; }

Expr& Expr::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
  } else {
    for (auto& [m, c] : terms_) c *= factor;
  }
  return *this;
}

Expr Expr::pow(unsigned exponent) const {
  Expr result(1);
  Expr base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

int Expr::order() const {
  int best = -1;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, p] : m.factors()) best = std::max(best, v.order());
  }
  return best;
}

std::vector<JetVariable> Expr::variables() const {
  std::set<JetVariable> seen;
  for (const auto& [m, c] : terms_) {
    for (const auto& [v, p] : m.factors()) seen.insert(v);
  }
  return {seen.begin(), seen.end()};
}

bool Expr::has_fiber_variables() const { return order() >= 0; }

int Expr::degree_in(const JetVariable& v) const {
  int best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, m.power_of(v));
  return best;
}

int Expr::total_degree() const {
  int best = 0;
  for (const auto& [m, c] : terms_) best = std::max(best, m.degree());
  return best;
}

Expr Expr::coefficient(const JetVariable& v, int k) const {
  Expr out;
  for (const auto& [m, c] : terms_) {
    if (m.power_of(v) == k) out.add_term(m.without(v), c);
  }
  return out;
}

Expr Expr::substitute(const JetVariable& v, const Expr& value) const {
  return substitute([&](const JetVariable& w) -> const Expr* { return w == v ? &value : nullptr; });
}

Expr Expr::substitute(const std::function<const Expr*(const JetVariable&)>& lookup) const {
  Expr out;
  std::map<std::pair<JetVariable, int>, Expr> power_cache;
  for (const auto& [m, c] : terms_) {
    Monomial kept;
    Expr factor(c);
    for (const auto& [v, p] : m.factors()) {
      if (const Expr* value = lookup(v)) {
        auto key = std::make_pair(v, p);
        auto it = power_cache.find(key);
        if (it == power_cache.end()) {
          it = power_cache.emplace(key, value->pow(static_cast<unsigned>(p))).first;
        }
        factor *= it->second;
      } else {
        kept = kept * Monomial(v, p);
      }
    }
    for (const auto& [fm, fc] : factor.terms()) out.add_term(kept * fm, fc);
  }
  return out;
}

double Expr::evaluate(const std::function<double(const JetVariable&)>& value_of) const {
  double total = 0.0;
  for (const auto& [m, c] : terms_) {
    double term = c.get_d();
    for (const auto& [v, p] : m.factors()) term *= std::pow(value_of(v), p);
    total += term;
  }
  return total;
}

// -------------------------------------------------------------- Derivatives

Expr partial_derivative(const Expr& e, const JetVariable& v) {
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    int p = m.power_of(v);
    if (p > 0) out.add_term(m.reduced(v), c * p);
  }
  return out;
}

Expr partial_derivative(const JetContext& ctx, const Expr& e, const JetVariable& v) {
  if (!v.valid_in(ctx)) throw DomainError("variable not in context");
  return partial_derivative(e, v);
}

Expr total_derivative(const Expr& e, int i) {
  if (i < 1 || i > kMaxBaseDim) throw DomainError("total derivative direction out of range");
  Expr out;
  for (const auto& [m, c] : e.terms()) {
    for (const auto& [v, p] : m.factors()) {
      if (v.is_base()) {
        if (v.index == i) out.add_term(m.reduced(v), c * p);
      } else {
        JetVariable raised = JetVariable::fiber(v.index, v.multi.with(i));
        out.add_term(m.reduced(v) * Monomial(raised), c * p);
      }
    }
  }
  return out;
}

Expr total_derivative(const Expr& e, const MultiIndex& J) {
  Expr out = e;
  for (int i : J.entries()) out = total_derivative(out, i);
  return out;
}

// ------------------------------------------------------------------ Section

Section::Section(std::vector<Expr> components) : components_(std::move(components)) {
  for (const Expr& c : components_) {
    if (c.has_fiber_variables()) {
      throw DomainError("section components may depend on base variables only");
    }
  }
}

Expr Section::derivative(int alpha, const MultiIndex& I) const {
  if (alpha < 1 || alpha > static_cast<int>(components_.size())) {
    throw DomainError("section has no component " + std::to_string(alpha));
  }
  Expr out = components_[alpha - 1];
  for (int i : I.entries()) out = partial_derivative(out, JetVariable::base(i));
  return out;
}

Expr evaluate_on_section(const Expr& e, const Section& section) {
  std::map<JetVariable, Expr> values;
  for (const JetVariable& v : e.variables()) {
    if (v.is_fiber()) values.emplace(v, section.derivative(v.index, v.multi));
  }
  return e.substitute([&](const JetVariable& v) -> const Expr* {
    auto it = values.find(v);
    return it == values.end() ? nullptr : &it->second;
  });
}

}  // namespace varseq
