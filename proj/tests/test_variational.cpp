#include <gtest/gtest.h>

#include "support/random_objects.hpp"
#include "varseq/divergence.hpp"
#include "varseq/errors.hpp"
#include "varseq/variational.hpp"

using namespace varseq;

namespace {

Expr u(MultiIndex I = {}) { return Expr::fiber(1, I); }
Expr x(int i = 1) { return Expr::base(i); }
const Rational half = make_rational(1, 2);

struct Line {
  ContextPtr ctx = JetContext::make(1, 1, 1);
  DiffForm dx(int s = 1) const { return DiffForm::dx(ctx, s, 1); }
  DiffForm w(MultiIndex I = {}, int s = 2) const { return DiffForm::contact(ctx, s, 1, I); }
  VariationalClass lagrangian(const Expr& L) const { return represent(L * dx()); }
};

struct Plane {  // x1 = t, x2 = x
  ContextPtr ctx = JetContext::make(2, 1, 1);
  VariationalClass lagrangian(const Expr& L) const { return represent(L * DiffForm::omega0(ctx, 1)); }
};

}  // namespace

TEST(Variational, RepresentKillsContactPart) {
  Line l;
  DiffForm rho = u() * l.dx() + x() * DiffForm::contact(l.ctx, 1, 1);
  EXPECT_EQ(represent(rho).representative, u() * l.dx());
  EXPECT_TRUE(represent(wedge(l.w({1}), l.dx())).is_zero());
  DiffForm horizontal = u({1}) * x() * l.dx();
  EXPECT_EQ(represent(horizontal).representative, horizontal);
}

TEST(Variational, InteriorEulerExamples) {
  Line l;
  DiffForm source = (u() * x()) * wedge(l.w(), l.dx());
  EXPECT_EQ(interior_euler(source), source);
  Expr g = u({1}) * u();
  // g omega_x ^ dx -> -D_x(g) omega ^ dx
  EXPECT_EQ(interior_euler(g * wedge(l.w({1}), l.dx())), -total_derivative(g, 1) * wedge(l.w(), l.dx()));
  EXPECT_TRUE(interior_euler(wedge(l.w({1}), l.dx())).is_zero());
  EXPECT_THROW(interior_euler(l.dx()), DomainError);
}

TEST(Variational, ResidualReconstructs) {
  Line l;
  DiffForm rho = (u({1}) * u()) * wedge(l.w({1}), l.dx());
  DiffForm R = euler_residual(rho);
  EXPECT_EQ(contact_component(exterior_differential(contact_component(R, 1)), 1),
            contact_component(rho, 1) - interior_euler(rho));
  EXPECT_TRUE(euler_residual(u() * wedge(l.w(), l.dx())).is_zero());
}

TEST(Variational, GeneralizedDecompositionBelowTopDegree) {
  // n = 2, p = 1, k = 1: g omega_1 ^ dx^2
  auto ctx = JetContext::make(2, 1, 1);
  DiffForm rho = (u() * u({2})) * wedge(DiffForm::contact(ctx, 2, 1, {1}), DiffForm::dx(ctx, 2, 2));
  EulerDecomposition d = generalized_interior_euler(rho, 1);
  EXPECT_EQ(d.source_part + d.divergence_part, contact_component(rho, 1));
  // Already of the form omega ^ (horizontal): no divergence part.
  DiffForm plain = (x(1) * u()) * wedge(DiffForm::contact(ctx, 2, 1), DiffForm::dx(ctx, 2, 1));
  EulerDecomposition e = generalized_interior_euler(plain, 1);
  EXPECT_EQ(e.source_part, plain);
  EXPECT_TRUE(e.divergence_part.is_zero());
  EXPECT_THROW(generalized_interior_euler(plain, 3), DomainError);
}

TEST(Variational, HarmonicOscillator) {
  Line l;
  VariationalClass lambda = l.lagrangian(half * (u({1}) * u({1}) - u() * u()));
  auto E = euler_lagrange_coefficients(lambda);
  ASSERT_EQ(E.size(), 1u);
  EXPECT_EQ(E[0], -(u({1, 1}) + u()));
  EXPECT_EQ(momentum(lambda), u({1}) * DiffForm::contact(l.ctx, 1, 1));
  ProjectableField translation(l.ctx, {Expr(1)}, {Expr()});
  EXPECT_TRUE(lie_derivative_class(translation, lambda).is_zero());
  DiffForm eps = noether_current(lambda, translation);
  EXPECT_EQ(eps.as_function(), -half * (u({1}) * u({1}) + u() * u()));
  EXPECT_TRUE(noether_current(lambda, ProjectableField::zero(l.ctx)).is_zero());
}

TEST(Variational, FreeParticleBoost) {
  Line l;
  VariationalClass lambda = l.lagrangian(half * u({1}) * u({1}));
  EXPECT_EQ(euler_lagrange_coefficients(lambda)[0], -u({1, 1}));
  EXPECT_EQ(momentum(lambda), u({1}) * DiffForm::contact(l.ctx, 1, 1));
  ProjectableField boost(l.ctx, {Expr()}, {x()});
  EXPECT_EQ(lie_derivative_class(boost, lambda).representative, u({1}) * l.dx());
  EXPECT_EQ(noether_current(lambda, boost).as_function(), x() * u({1}));
  EXPECT_EQ(bessel_hagen_boundary(lambda, boost).as_function(), u());
  NBHReport report = nbh_analysis(lambda, boost, std::nullopt, default_on_shell_cap(1));
  EXPECT_EQ(report.current.as_function(), x() * u({1}) - u());
  EXPECT_EQ(combined_status(report.conservation), OnShellStatus::Vanishes);
}

TEST(Variational, WaveEquation) {
  Plane p;
  VariationalClass lambda = p.lagrangian(half * (u({1}) * u({1}) - u({2}) * u({2})));
  EXPECT_EQ(euler_lagrange_coefficients(lambda)[0], -u({1, 1}) + u({2, 2}));
  DiffForm expected = u({1}) * wedge(DiffForm::contact(p.ctx, 1, 1), DiffForm::omega_i(p.ctx, 1, 1)) -
                      u({2}) * wedge(DiffForm::contact(p.ctx, 1, 1), DiffForm::omega_i(p.ctx, 1, 2));
  EXPECT_EQ(momentum(lambda), expected);
  ProjectableField time(p.ctx, {Expr(1), Expr()}, {Expr()});
  EXPECT_TRUE(bessel_hagen_boundary(lambda, time).is_zero());
  DiffForm eps = noether_current(lambda, time);
  auto reduced = on_shell_reduce(horizontal_differential(eps), euler_lagrange_coefficients(lambda), 4);
  EXPECT_EQ(combined_status(reduced), OnShellStatus::Vanishes);
}

TEST(Variational, ExactLagrangianHasNoEquations) {
  Line l;
  EXPECT_TRUE(euler_lagrange(l.lagrangian(u({1}))).is_zero());
  EXPECT_TRUE(momentum(l.lagrangian(u())).is_zero());
}

TEST(Variational, HelmholtzExamples) {
  Line l;
  auto source = [&](const Expr& E) { return represent(E * wedge(DiffForm::contact(l.ctx, 1, 1), l.dx(1))); };
  EXPECT_FALSE(is_locally_variational(source(u({1}))));
  EXPECT_TRUE(is_locally_variational(source(u())));
  EXPECT_TRUE(is_locally_variational(source(u({1, 1}) + u())));
}

TEST(Variational, GeneralizedSymmetries) {
  Line l;
  auto source = [&](const Expr& E) { return represent(E * wedge(DiffForm::contact(l.ctx, 1, 1), l.dx(1))); };
  VariationalClass oscillator = source(-(u({1, 1}) + u()));
  VariationalClass free = source(-u({1, 1}));
  EXPECT_TRUE(check_generalized_symmetry(oscillator, ProjectableField(l.ctx, {Expr(1)}, {Expr()})));
  EXPECT_TRUE(check_generalized_symmetry(free, ProjectableField(l.ctx, {Expr()}, {x()})));
  EXPECT_FALSE(check_generalized_symmetry(free, ProjectableField(l.ctx, {x()}, {Expr()})));
  EXPECT_THROW(check_generalized_symmetry(source(u({1})), ProjectableField::zero(l.ctx)), PreconditionError);
}

TEST(Variational, BesselHagenPreconditions) {
  Line l;
  VariationalClass lambda = l.lagrangian(half * (u({1}) * u({1}) - u() * u()));
  ProjectableField scaling(l.ctx, {Expr()}, {u()});
  EXPECT_THROW(bessel_hagen_boundary(lambda, scaling), PreconditionError);
  EXPECT_THROW(nbh_analysis(lambda, scaling, std::nullopt, 4), PreconditionError);
}

TEST(Variational, LieDerivativeClassExamples) {
  Line l;
  VariationalClass lambda = l.lagrangian(half * (u({1}) * u({1}) - u() * u()));
  EXPECT_TRUE(lie_derivative_class(ProjectableField(l.ctx, {Expr(1)}, {Expr()}), lambda).is_zero());
  EXPECT_TRUE(lie_derivative_class(ProjectableField::zero(l.ctx), lambda).is_zero());
}

TEST(OnShell, Examples) {
  Expr uxx = u({1, 1});
  auto r1 = on_shell_reduce(x() * uxx, {uxx}, 4);
  EXPECT_EQ(r1.status, OnShellStatus::Vanishes);
  auto r2 = on_shell_reduce(u({1}) * (uxx + u()), {uxx + u()}, 4);
  EXPECT_EQ(r2.status, OnShellStatus::Vanishes);
  auto r3 = on_shell_reduce(u({1}) * u({1}), {uxx}, 4);
  EXPECT_EQ(r3.status, OnShellStatus::NormalForm);
  EXPECT_EQ(r3.reduced, u({1}) * u({1}));
  auto r4 = on_shell_reduce(u({1, 1, 1, 1, 1, 1}), {uxx}, 2);
  EXPECT_EQ(r4.status, OnShellStatus::Inconclusive);
  auto r5 = on_shell_reduce(u(), {uxx * uxx}, 2);
  EXPECT_EQ(r5.status, OnShellStatus::Inconclusive);
}

TEST(Divergence, Inversion) {
  auto ctx = JetContext::make(2, 1, 2);
  // Hessian null Lagrangian: not linear in the top derivative.
  Expr L = u({1, 1}) * u({2, 2}) - u({1, 2}) * u({1, 2});
  auto b = invert_total_divergence(*ctx, L);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(total_derivative((*b)[0], 1) + total_derivative((*b)[1], 2), L);
  auto c = invert_total_divergence(*ctx, x(1) * x(2) + u({1}) * u({2, 2}) + u({2}) * u({1, 2}));
  ASSERT_TRUE(c.has_value());
}
