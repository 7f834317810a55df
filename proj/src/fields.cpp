#include "varseq/fields.hpp"

#include <map>
#include <mutex>
#include <utility>

#include "varseq/errors.hpp"

namespace varseq {

// ---------------------------------------------------------- ProjectableField

ProjectableField::ProjectableField(ContextPtr ctx, std::vector<Expr> xi, std::vector<Expr> Xi)
    : ctx_(std::move(ctx)), xi_(std::move(xi)), Xi_(std::move(Xi)) {
  if (static_cast<int>(xi_.size()) != ctx_->n()) throw DomainError("xi must have n components");
  if (static_cast<int>(Xi_.size()) != ctx_->m()) throw DomainError("Xi must have m components");
  for (const Expr& e : xi_) {
    if (e.has_fiber_variables()) throw DomainError("xi may depend on base variables only");
  }
  for (const Expr& e : Xi_) {
    if (e.order() > 0) throw DomainError("Xi may not depend on derivatives");
  }
  for (const Expr& e : xi_) {
    for (const JetVariable& v : e.variables()) {
      if (!v.valid_in(*ctx_)) throw DomainError("variable not in context");
    }
  }
  for (const Expr& e : Xi_) {
    for (const JetVariable& v : e.variables()) {
      if (!v.valid_in(*ctx_)) throw DomainError("variable not in context");
    }
  }
}

ProjectableField ProjectableField::zero(ContextPtr ctx) {
  const int n = ctx->n();
  const int m = ctx->m();
  return {std::move(ctx), std::vector<Expr>(n), std::vector<Expr>(m)};
}

bool ProjectableField::is_vertical() const {
  return std::all_of(xi_.begin(), xi_.end(), [](const Expr& e) { return e.is_zero(); });
}

bool ProjectableField::is_zero() const {
  return is_vertical() && std::all_of(Xi_.begin(), Xi_.end(), [](const Expr& e) { return e.is_zero(); });
}

Expr ProjectableField::characteristic(int alpha) const {
  Expr q = Xi(alpha);
  for (int j = 1; j <= ctx_->n(); ++j) q -= Expr::fiber(alpha, {j}) * xi(j);
  return q;
}

// ------------------------------------------------------------------ JetField

struct JetField::Cache {
  std::mutex mutex;
  std::map<std::pair<int, MultiIndex>, Expr> values;
};

JetField::JetField(ContextPtr ctx, std::vector<Expr> base, FiberFn fiber)
    : ctx_(std::move(ctx)),
      base_(std::move(base)),
      fiber_fn_(std::move(fiber)),
      cache_(std::make_shared<Cache>()) {
  if (static_cast<int>(base_.size()) != ctx_->n()) throw DomainError("field must have n base components");
}

Expr JetField::fiber(int alpha, const MultiIndex& I) const {
  auto key = std::make_pair(alpha, I);
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->values.find(key); it != cache_->values.end()) return it->second;
  }
  Expr value = fiber_fn_(alpha, I);
  std::lock_guard lock(cache_->mutex);
  return cache_->values.emplace(key, std::move(value)).first->second;
}

Expr JetField::value(const Covector& c) const {
  switch (c.kind) {
    case Covector::Kind::Dx:
      return base(c.index);
    case Covector::Kind::DyTop:
      return fiber(c.index, c.multi);
    case Covector::Kind::Contact: {
      Expr v = fiber(c.index, c.multi);
      for (int j = 1; j <= ctx_->n(); ++j) {
        if (!base(j).is_zero()) v -= Expr::fiber(c.index, c.multi.with(j)) * base(j);
      }
      return v;
    }
  }
  throw InternalError("unknown covector kind");
}

// ------------------------------------------------------------ prolongations

namespace {

Expr horizontal_component(const ProjectableField& f, int alpha, const MultiIndex& I) {
  Expr out;
  for (int i = 1; i <= f.context()->n(); ++i) {
    if (!f.xi(i).is_zero()) out += Expr::fiber(alpha, I.with(i)) * f.xi(i);
  }
  return out;
}

JetField vertical_part(const ProjectableField& f) {
  std::vector<Expr> characteristics;
  for (int a = 1; a <= f.context()->m(); ++a) characteristics.push_back(f.characteristic(a));
  return {f.context(), std::vector<Expr>(f.context()->n()),
          [characteristics](int alpha, const MultiIndex& I) {
            return total_derivative(characteristics[alpha - 1], I);
          }};
}

JetField horizontal_part(const ProjectableField& f) {
  return {f.context(), f.xi(),
          [f](int alpha, const MultiIndex& I) { return horizontal_component(f, alpha, I); }};
}

}  // namespace

JetField full_prolongation(const ProjectableField& field) {
  JetField vertical = vertical_part(field);
  return {field.context(), field.xi(), [field, vertical](int alpha, const MultiIndex& I) {
            return vertical.fiber(alpha, I) + horizontal_component(field, alpha, I);
          }};
}

ProlongedField::ProlongedField(ProjectableField source, int order)
    : source_(std::move(source)), order_(order), field_(full_prolongation(source_)) {
  if (order < 0) throw DomainError("negative prolongation order");
}

Expr ProlongedField::component(int alpha, const MultiIndex& I) const {
  if (I.order() > order_) throw DomainError("component above the prolongation order");
  return field_.fiber(alpha, I);
}

ProlongedField ProlongedField::truncate(int s) const {
  if (s > order_) throw DomainError("truncation above the prolongation order");
  ProlongedField out = *this;
  out.order_ = s;
  return out;
}

ProlongedField prolong(const ProjectableField& field, int order) { return {field, order}; }

SplitField split(const ProjectableField& field) {
  return {horizontal_part(field), vertical_part(field)};
}

SplitField split(const ProlongedField& field) { return split(field.source()); }

// ---------------------------------------------------------------- Cartan

DiffForm interior_product(const JetField& X, const DiffForm& rho) {
  return contract(rho, [&X](const Covector& c) { return X.value(c); });
}

DiffForm interior_product(const ProlongedField& X, const DiffForm& rho) {
  return interior_product(X.field(), rho);
}

DiffForm lie_derivative(const JetField& X, const DiffForm& rho) {
  if (!rho.typed()) return rho;
  DiffForm out = interior_product(X, exterior_differential(rho));
  if (rho.degree() > 0) out += exterior_differential(interior_product(X, rho));
  return out;
}

DiffForm lie_derivative(const ProjectableField& field, const DiffForm& rho) {
  return lie_derivative(full_prolongation(field), rho);
}

}  // namespace varseq
