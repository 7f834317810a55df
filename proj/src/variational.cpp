#include "varseq/variational.hpp"

#include <functional>
#include <map>
#include <utility>

#include "varseq/divergence.hpp"
#include "varseq/errors.hpp"

namespace varseq {

namespace {

using EtaKey = std::pair<int, MultiIndex>;

int base_dim(const DiffForm& rho) { return rho.context()->n(); }

// theta ^ (d/dx^i _| F) for each term c F ^ theta, with the sign that makes
// p_k d p_k of the result equal to d_i of the input when F = omega_0.
DiffForm horizontal_antiderivative(const DiffForm& tau, int i, int k) {
  const DiffForm base = tau.has_top_covectors() ? pullback(tau, tau.order() + 1) : tau;
  DiffForm out(tau.context(), base.order(), tau.degree() - 1);
  for (const auto& [w, c] : base.terms()) {
    Wedge horizontal;
    Wedge contact;
    for (const Covector& cov : w) (cov.is_horizontal() ? horizontal : contact).push_back(cov);
    auto pos = std::find(horizontal.begin(), horizontal.end(), Covector::dx(i));
    if (pos == horizontal.end()) continue;
    const int p = static_cast<int>(horizontal.size());
    const auto t = static_cast<int>(pos - horizontal.begin());
    horizontal.erase(pos);
    int sign = ((k + p * k + t) % 2 == 0) ? 1 : -1;
    Wedge monomial = contact;
    monomial.insert(monomial.end(), horizontal.begin(), horizontal.end());
    out.add_term(monomial, sign > 0 ? c : -c);
  }
  return out;
}

DiffForm zero_like(const ContextPtr& ctx, int order, int degree) { return {ctx, order, degree}; }

VariationalClass noether_residual_with(const ProjectableField& field, const VariationalClass& lambda,
                                           const DiffForm& epsilon) {
  SplitField parts = split(field);
  DiffForm lhs = lie_derivative_class(field, lambda).representative;
  VariationalClass el = euler_lagrange(lambda);
  DiffForm source_term = interior_product(parts.vertical, el.representative);
  return represent(lhs - source_term - horizontal_differential(epsilon));
}

DiffForm noether_current_unchecked(const VariationalClass& lambda, const ProjectableField& field) {
  SplitField parts = split(field);
  DiffForm p = momentum(lambda);
  DiffForm out = interior_product(parts.horizontal, lambda.representative);
  if (!p.is_zero()) out += interior_product(parts.vertical, p);
  return out;
}

}  // namespace

VariationalClass represent(const DiffForm& rho) {
  if (!rho.typed()) return {0, rho};
  const int n = rho.context()->n();
  const int q = rho.degree();
  if (q <= n) return {q, horizontalize(rho)};
  if (q <= n + 2) return {q, interior_euler(rho)};
  return {q, rho};
}

EulerDecomposition generalized_interior_euler(const DiffForm& rho, int k) {
  const int q = rho.degree();
  const int p = q - k;
  if (!rho.typed()) throw DomainError("form without context");
  if (k < 1 || p < 0 || p > base_dim(rho)) throw DomainError("inconsistent contact degree");
  const ContextPtr& ctx = rho.context();

  const DiffForm sigma = contact_component(rho, k);
  const int s = sigma.order();

  std::map<EtaKey, DiffForm> eta;
  for (const auto& [w, c] : sigma.terms()) {
    for (const Covector& cov : w) {
      if (cov.kind == Covector::Kind::Contact) eta.try_emplace({cov.index, cov.multi});
    }
  }
  int max_order = 0;
  const Expr scale(make_rational(1, k));
  for (auto& [key, form] : eta) {
    const Covector target = Covector::contact(key.first, key.second);
    form = scale * contract(sigma, [&](const Covector& c) { return Expr(c == target ? 1 : 0); });
    max_order = std::max(max_order, key.second.order());
  }
  auto eta_of = [&](int alpha, const MultiIndex& J) -> const DiffForm* {
    auto it = eta.find({alpha, J});
    return it == eta.end() ? nullptr : &it->second;
  };
  // d_J eta^K, built incrementally and shared between the sums below.
  std::map<std::pair<EtaKey, MultiIndex>, DiffForm> derived;
  std::function<const DiffForm&(const EtaKey&, const MultiIndex&)> eta_derivative =
      [&](const EtaKey& key, const MultiIndex& J) -> const DiffForm& {
    if (J.empty()) return eta.at(key);
    auto it = derived.find({key, J});
    if (it != derived.end()) return it->second;
    const int i = J.last();
    DiffForm value = total_derivative(eta_derivative(key, J.without(i)), i);
    return derived.emplace(std::pair{key, J}, std::move(value)).first->second;
  };

  EulerDecomposition out;
  out.horizontal_degree = p;
  out.contact_degree = k;
  out.source_part = zero_like(ctx, s, q);
  out.divergence_part = zero_like(ctx, s, q);
  DiffForm candidate = zero_like(ctx, s, q - 1);

  for (int alpha = 1; alpha <= ctx->m(); ++alpha) {
    const DiffForm omega = DiffForm::contact(ctx, s, alpha);
    DiffForm sum = zero_like(ctx, s, q - 1);
    for (const auto& [key, form] : eta) {
      if (key.first != alpha) continue;
      const DiffForm& term = eta_derivative(key, key.second);
      sum += key.second.order() % 2 == 0 ? term : -term;
    }
    out.source_part += wedge(omega, sum);

    for (const MultiIndex& I : MultiIndex::all_up_to(ctx->n(), max_order)) {
      if (I.empty()) continue;
      DiffForm zeta = zero_like(ctx, s, q - 1);
      for (const MultiIndex& J : MultiIndex::all_up_to(ctx->n(), max_order - I.order())) {
        const MultiIndex JI = J + I;
        if (eta_of(alpha, JI) == nullptr) continue;
        Rational weight = binomial(static_cast<unsigned>(I.order() + J.order()), static_cast<unsigned>(J.order()));
        weight *= make_rational(static_cast<long>(J.multiplicity()), static_cast<long>(JI.multiplicity()));
        if (J.order() % 2 == 1) weight = -weight;
        zeta += Expr(weight) * eta_derivative({alpha, JI}, J);
      }
      if (zeta.is_zero()) continue;
      const Expr mult(static_cast<long>(I.multiplicity()));
      const DiffForm inner = wedge(omega, zeta);
      const int i = I.last();
      const DiffForm partial = total_derivative(inner, I.without(i));
      out.divergence_part += mult * total_derivative(partial, i);
      candidate += mult * horizontal_antiderivative(partial, i, k);
    }
  }

  const DiffForm check = contact_component(exterior_differential(contact_component(candidate, k)), k);
  if (check == out.divergence_part) {
    out.residual = candidate;
  } else if (p == base_dim(rho)) {
    throw InternalError("interior Euler residual failed verification");
  }
  return out;
}

DiffForm interior_euler(const DiffForm& rho) {
  const int k = rho.degree() - base_dim(rho);
  if (k < 1 || k > 2) throw DomainError("interior Euler operator needs degree n+1 or n+2");
  return generalized_interior_euler(rho, k).source_part;
}

DiffForm euler_residual(const DiffForm& rho) {
  const int k = rho.degree() - base_dim(rho);
  if (k < 1 || k > 2) throw DomainError("interior Euler operator needs degree n+1 or n+2");
  auto decomposition = generalized_interior_euler(rho, k);
  return *decomposition.residual;
}

VariationalClass variational_differential(const VariationalClass& alpha) {
  return represent(exterior_differential(alpha.representative));
}

VariationalClass euler_lagrange(const VariationalClass& lambda) {
  if (lambda.degree != lambda.context()->n()) throw DomainError("Lagrangian must have degree n");
  return variational_differential(lambda);
}

std::vector<Expr> source_coefficients(const VariationalClass& eta) {
  const int n = eta.context()->n();
  if (eta.degree != n + 1) throw DomainError("source form must have degree n+1");
  std::vector<Expr> out;
  for (int alpha = 1; alpha <= eta.context()->m(); ++alpha) {
    Wedge w;
    for (int i = 1; i <= n; ++i) w.push_back(Covector::dx(i));
    w.push_back(Covector::contact(alpha));
    Expr c = eta.representative.coefficient(w);
    out.push_back(n % 2 == 0 ? c : -c);
  }
  return out;
}

std::vector<Expr> euler_lagrange_coefficients(const VariationalClass& lambda) {
  return source_coefficients(euler_lagrange(lambda));
}

VariationalClass helmholtz(const VariationalClass& eta) {
  if (eta.degree != eta.context()->n() + 1) throw DomainError("source form must have degree n+1");
  return variational_differential(eta);
}

bool is_locally_variational(const VariationalClass& eta) { return helmholtz(eta).is_zero(); }

DiffForm momentum(const VariationalClass& lambda) {
  if (lambda.degree != lambda.context()->n()) throw DomainError("Lagrangian must have degree n");
  return -contact_component(euler_residual(exterior_differential(lambda.representative)), 1);
}

std::optional<DiffForm> generalized_momentum(const VariationalClass& alpha) {
  if (alpha.degree >= alpha.context()->n()) {
    throw DomainError("generalized momentum needs degree below n (use momentum)");
  }
  auto decomposition = generalized_interior_euler(exterior_differential(alpha.representative), 1);
  if (!decomposition.residual) return std::nullopt;
  return -contact_component(*decomposition.residual, 1);
}

VariationalClass contract_class(const JetField& X, const VariationalClass& alpha) {
  return represent(interior_product(X, alpha.representative));
}

VariationalClass lie_derivative_class(const ProjectableField& field, const VariationalClass& alpha) {
  return represent(lie_derivative(field, alpha.representative));
}

VariationalClass lower_cartan_residual(const ProjectableField& field, const VariationalClass& alpha) {
  const int n = alpha.context()->n();
  if (alpha.degree < 1 || alpha.degree > n - 1) throw DomainError("Cartan formula below degree n needs 1 <= q <= n-1");
  SplitField parts = split(field);
  DiffForm residual = lie_derivative_class(field, alpha).representative;
  residual -= interior_product(parts.horizontal, variational_differential(alpha).representative);
  residual -= variational_differential(contract_class(parts.horizontal, alpha)).representative;
  if (auto p = generalized_momentum(alpha)) {
    residual -= variational_differential(represent(interior_product(parts.vertical, *p))).representative;
  } else {
    auto decomposition = generalized_interior_euler(exterior_differential(alpha.representative), 1);
    residual -= horizontalize(interior_product(parts.vertical, decomposition.divergence_part));
  }
  return represent(residual);
}

VariationalClass lower_cartan_source_term(const ProjectableField& field, const VariationalClass& alpha) {
  auto decomposition = generalized_interior_euler(exterior_differential(alpha.representative), 1);
  return represent(interior_product(split(field).vertical, decomposition.source_part));
}

VariationalClass noether_residual(const ProjectableField& field, const VariationalClass& lambda) {
  return noether_residual_with(field, lambda, noether_current_unchecked(lambda, field));
}

VariationalClass upper_cartan_residual(const ProjectableField& field, const VariationalClass& alpha) {
  if (alpha.degree < alpha.context()->n() + 1) throw DomainError("Cartan formula above degree n needs q >= n+1");
  const JetField vertical = split(field).vertical;
  DiffForm residual = lie_derivative_class(field, alpha).representative;
  residual -= contract_class(vertical, variational_differential(alpha)).representative;
  residual -= variational_differential(contract_class(vertical, alpha)).representative;
  return represent(residual);
}

VariationalClass naturality_residual(const ProjectableField& field, const VariationalClass& alpha) {
  DiffForm lhs = variational_differential(lie_derivative_class(field, alpha)).representative;
  DiffForm rhs = lie_derivative_class(field, variational_differential(alpha)).representative;
  return represent(lhs - rhs);
}

DiffForm noether_current(const VariationalClass& lambda, const ProjectableField& field) {
  DiffForm epsilon = noether_current_unchecked(lambda, field);
  if (!noether_residual_with(field, lambda, epsilon).is_zero()) {
    throw InternalError("Noether identity residual is nonzero");
  }
  return epsilon;
}

bool check_generalized_symmetry(const VariationalClass& eta, const ProjectableField& field) {
  if (!is_locally_variational(eta)) throw PreconditionError("source form is not locally variational");
  return lie_derivative_class(field, eta).is_zero();
}

Expr density(const DiffForm& rho) {
  const int n = base_dim(rho);
  if (rho.degree() != n) throw DomainError("density of a form of degree other than n");
  Wedge w;
  for (int i = 1; i <= n; ++i) w.push_back(Covector::dx(i));
  return rho.coefficient(w);
}

DiffForm current_from_components(const ContextPtr& ctx, const std::vector<Expr>& b) {
  int order = 0;
  for (const Expr& e : b) order = std::max(order, e.order());
  DiffForm out(ctx, order, ctx->n() - 1);
  for (int i = 1; i <= ctx->n(); ++i) {
    if (!b[i - 1].is_zero()) out += b[i - 1] * DiffForm::omega_i(ctx, order, i);
  }
  return out;
}

DiffForm bessel_hagen_boundary(const VariationalClass& lambda, const ProjectableField& field) {
  const ContextPtr& ctx = lambda.context();
  VariationalClass lie = lie_derivative_class(field, lambda);
  Expr L = density(lie.representative);
  if (L.is_zero()) return DiffForm(ctx, 0, ctx->n() - 1);
  if (!euler_lagrange(lie).is_zero()) throw PreconditionError("not a divergence");
  auto b = invert_total_divergence(*ctx, L);
  if (!b) throw InternalError("divergence inversion failed on an admissible input");
  return current_from_components(ctx, *b);
}

NBHReport nbh_analysis(const VariationalClass& lambda, const ProjectableField& field,
                       const std::optional<DiffForm>& mu, int on_shell_cap) {
  const ContextPtr& ctx = lambda.context();
  const int n = ctx->n();
  VariationalClass el = euler_lagrange(lambda);
  if (!lie_derivative_class(field, el).is_zero()) {
    throw PreconditionError("vector field is not a generalized symmetry of the Euler-Lagrange form");
  }
  const std::vector<Expr> generators = source_coefficients(el);
  const SplitField parts = split(field);

  NBHReport report;
  report.lie_derivative = lie_derivative_class(field, lambda).representative;
  report.epsilon = noether_current(lambda, field);
  report.beta = bessel_hagen_boundary(lambda, field);
  report.current = report.epsilon - report.beta;
  report.conservation = on_shell_reduce(horizontal_differential(report.current), generators, on_shell_cap);

  if (!mu) return report;
  if (mu->degree() != n - 1 || !(*mu->context() == *ctx)) {
    throw DomainError("mu must be a form of degree n-1 in the problem context");
  }
  MuAnalysis a;
  const VariationalClass mu_class = represent(*mu);
  a.mu = mu_class.representative;
  a.lie_mu = lie_derivative_class(field, mu_class).representative;
  const DiffForm dh_mu = horizontal_differential(mu_class.representative);
  const VariationalClass modified = represent(lambda.representative - dh_mu);
  a.modified_invariant = lie_derivative_class(field, modified).is_zero();
  const DiffForm gap = report.beta - a.lie_mu;
  a.beta_minus_lie_mu_closed = horizontal_differential(gap).is_zero();
  a.exact_branch = represent(gap).is_zero();

  const DiffForm d_mu = exterior_differential(mu_class.representative);
  const EulerDecomposition split_mu = generalized_interior_euler(d_mu, 1);
  a.vertical_contraction_residual =
      horizontal_differential(interior_product(parts.vertical, vertical_differential(mu_class.representative))) -
      horizontal_differential(interior_product(parts.vertical, split_mu.source_part));
  a.momentum_contraction_residual =
      horizontal_differential(interior_product(parts.vertical, momentum(represent(dh_mu))));

  if (!a.exact_branch) {
    a.potential_status = "beta differs from L_Xi mu; exact branch not applicable";
  } else if (n == 1) {
    a.potential_status = "not applicable for n = 1 (the potential would have degree -1)";
  } else if (auto p = generalized_momentum(mu_class)) {
    DiffForm potential = interior_product(parts.horizontal, mu_class.representative);
    if (!p->is_zero()) potential += horizontalize(interior_product(parts.vertical, *p));
    const DiffForm epsilon_mod = noether_current(modified, field);
    a.potential_check =
        on_shell_reduce(epsilon_mod - horizontal_differential(potential), generators, on_shell_cap);
    a.potential = potential;
    switch (combined_status(a.potential_check)) {
      case OnShellStatus::Vanishes:
        a.potential_status = "verified on-shell";
        break;
      case OnShellStatus::NormalForm:
        a.potential_status = "potential does not reproduce the current on-shell";
        break;
      case OnShellStatus::Inconclusive:
        a.potential_status = "inconclusive";
        break;
    }
  } else {
    a.potential_status = "generalized momentum of mu does not exist as a form";
  }
  report.mu = std::move(a);
  return report;
}

}  // namespace varseq
