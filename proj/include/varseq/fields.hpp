#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "varseq/forms.hpp"

namespace varseq {

/// Projectable vector field xi^i d/dx^i + Xi^a d/dy^a on Y.
class ProjectableField {
 public:
  /// Rejects xi depending on fiber variables and Xi depending on derivatives.
  ProjectableField(ContextPtr ctx, std::vector<Expr> xi, std::vector<Expr> Xi);
  static ProjectableField zero(ContextPtr ctx);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<Expr>& xi() const { return xi_; }
  const std::vector<Expr>& Xi() const { return Xi_; }
  const Expr& xi(int i) const { return xi_[i - 1]; }
  const Expr& Xi(int alpha) const { return Xi_[alpha - 1]; }
  bool is_vertical() const;
  bool is_zero() const;

  /// Characteristic Q^a = Xi^a - y^a_j xi^j.
  Expr characteristic(int alpha) const;

 private:
  ContextPtr ctx_;
  std::vector<Expr> xi_;
  std::vector<Expr> Xi_;
};

/// Vector field on the infinite jet space, b^i d/dx^i + sum f^a_I d/dy^a_I.
/// Fiber components are produced on demand and memoized; copies share the
/// cache, which is internally synchronized.
class JetField {
 public:
  using FiberFn = std::function<Expr(int alpha, const MultiIndex& I)>;

  JetField(ContextPtr ctx, std::vector<Expr> base, FiberFn fiber);

  const ContextPtr& context() const { return ctx_; }
  const Expr& base(int i) const { return base_[i - 1]; }
  Expr fiber(int alpha, const MultiIndex& I) const;
  /// Value of the field on a cobasis element (contact forms included).
  Expr value(const Covector& c) const;

 private:
  struct Cache;
  ContextPtr ctx_;
  std::vector<Expr> base_;
  FiberFn fiber_fn_;
  std::shared_ptr<Cache> cache_;
};

/// j^s Xi: components Xi^a_I for |I| <= s, satisfying
/// Xi^a_{Ii} = D_i Xi^a_I - y^a_{Ij} D_i xi^j.
class ProlongedField {
 public:
  ProlongedField(ProjectableField source, int order);

  const ProjectableField& source() const { return source_; }
  int order() const { return order_; }
  const Expr& xi(int i) const { return source_.xi(i); }
  /// Xi^a_I; requires |I| <= order.
  Expr component(int alpha, const MultiIndex& I) const;
  ProlongedField truncate(int s) const;
  /// The same prolongation without the order bound, for contractions on
  /// forms hosted above the order.
  const JetField& field() const { return field_; }

 private:
  ProjectableField source_;
  int order_;
  JetField field_;
};

/// Xi_H = xi^i D_i and Xi_V = j Xi - Xi_H (components D_I Q^a).
struct SplitField {
  JetField horizontal;
  JetField vertical;
};

ProlongedField prolong(const ProjectableField& field, int order);
JetField full_prolongation(const ProjectableField& field);
SplitField split(const ProjectableField& field);
SplitField split(const ProlongedField& field);

DiffForm interior_product(const JetField& X, const DiffForm& rho);
DiffForm interior_product(const ProlongedField& X, const DiffForm& rho);

/// Cartan formula L_X rho = X _| d rho + d(X _| rho).
DiffForm lie_derivative(const JetField& X, const DiffForm& rho);
DiffForm lie_derivative(const ProjectableField& field, const DiffForm& rho);

}  // namespace varseq
