#include <gtest/gtest.h>

#include "support/random_objects.hpp"
#include "varseq/errors.hpp"
#include "varseq/fields.hpp"

using namespace varseq;

namespace {

Expr u(MultiIndex I = {}) { return Expr::fiber(1, I); }
Expr x() { return Expr::base(1); }

}  // namespace

TEST(Fields, ProjectabilityIsEnforced) {
  auto ctx = JetContext::make(1, 1, 1);
  EXPECT_THROW(ProjectableField(ctx, {u()}, {Expr()}), DomainError);
  EXPECT_THROW(ProjectableField(ctx, {Expr()}, {u({1})}), DomainError);
  EXPECT_THROW(ProjectableField(ctx, {Expr(), Expr()}, {Expr()}), DomainError);
}

TEST(Fields, ProlongationExamples) {
  auto ctx = JetContext::make(1, 1, 2);
  ProlongedField translation = prolong(ProjectableField(ctx, {Expr(1)}, {Expr()}), 2);
  for (const MultiIndex& I : MultiIndex::all_up_to(1, 2)) EXPECT_TRUE(translation.component(1, I).is_zero());
  EXPECT_EQ(translation.xi(1), Expr(1));

  EXPECT_EQ(prolong(ProjectableField(ctx, {Expr()}, {u()}), 1).component(1, {1}), u({1}));
  EXPECT_EQ(prolong(ProjectableField(ctx, {Expr()}, {x()}), 1).component(1, {1}), Expr(1));
  EXPECT_THROW(translation.truncate(1).component(1, {1, 1}), DomainError);
}

TEST(Fields, ProlongationRecursion) {
  fuzz::RandomObjects gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto ctx = JetContext::make(gen.uniform(1, 2), gen.uniform(1, 2), 2);
    ProjectableField f = gen.projectable_field(ctx);
    ProlongedField jf = prolong(f, 3);
    for (int a = 1; a <= ctx->m(); ++a) {
      for (const MultiIndex& I : MultiIndex::all_up_to(ctx->n(), 2)) {
        for (int i = 1; i <= ctx->n(); ++i) {
          Expr expected = total_derivative(jf.component(a, I), i);
          for (int j = 1; j <= ctx->n(); ++j) {
            expected -= Expr::fiber(a, I.with(j)) * total_derivative(f.xi(j), i);
          }
          EXPECT_EQ(jf.component(a, I.with(i)), expected);
        }
      }
    }
  }
}

TEST(Fields, SplitExamples) {
  auto ctx = JetContext::make(1, 1, 2);
  SplitField t = split(ProjectableField(ctx, {Expr(1)}, {Expr()}));
  EXPECT_EQ(t.horizontal.base(1), Expr(1));
  EXPECT_EQ(t.horizontal.fiber(1, {1}), u({1, 1}));
  EXPECT_EQ(t.vertical.fiber(1, {}), -u({1}));
  EXPECT_EQ(t.vertical.fiber(1, {1}), -u({1, 1}));

  ProjectableField boost(ctx, {Expr()}, {x()});
  SplitField b = split(boost);
  EXPECT_TRUE(b.horizontal.fiber(1, {1}).is_zero());
  EXPECT_EQ(b.vertical.fiber(1, {1}), full_prolongation(boost).fiber(1, {1}));

  SplitField z = split(ProjectableField::zero(ctx));
  EXPECT_TRUE(z.vertical.fiber(1, {1, 1}).is_zero());
  EXPECT_TRUE(z.horizontal.base(1).is_zero());
}

TEST(Fields, SplitSumsToProlongation) {
  fuzz::RandomObjects gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto ctx = JetContext::make(gen.uniform(1, 2), gen.uniform(1, 2), 2);
    ProjectableField f = gen.projectable_field(ctx);
    SplitField s = split(f);
    JetField full = full_prolongation(f);
    for (int a = 1; a <= ctx->m(); ++a) {
      for (const MultiIndex& I : MultiIndex::all_up_to(ctx->n(), 2)) {
        EXPECT_EQ(s.horizontal.fiber(a, I) + s.vertical.fiber(a, I), full.fiber(a, I));
      }
    }
  }
}

TEST(Fields, TranslationContractedIntoVolume) {
  auto ctx = JetContext::make(2, 1, 1);
  ProjectableField d1(ctx, {Expr(1), Expr()}, {Expr()});
  EXPECT_EQ(interior_product(prolong(d1, 1), DiffForm::omega0(ctx, 1)), DiffForm::omega_i(ctx, 1, 1));
}

TEST(Fields, LieDerivativePreservesContactIdeal) {
  fuzz::RandomObjects gen(23);
  for (int trial = 0; trial < 20; ++trial) {
    auto ctx = JetContext::make(gen.uniform(1, 2), 1, 2);
    ProjectableField f = gen.projectable_field(ctx);
    DiffForm rho = gen.form(ctx, 2, gen.uniform(1, 3));
    DiffForm contact = rho - horizontalize(rho);
    EXPECT_TRUE(horizontalize(lie_derivative(f, contact)).is_zero());
  }
}

TEST(Fields, LieDerivativeOfFunctionIsDerivation) {
  auto ctx = JetContext::make(1, 1, 1);
  ProjectableField scaling(ctx, {x()}, {u()});
  DiffForm f = DiffForm::function(ctx, 1, u({1}));
  // x d/dx + u d/du prolongs to (u_x - u_x) d/du_x on first derivatives.
  EXPECT_TRUE(lie_derivative(scaling, f).is_zero());
  DiffForm g = DiffForm::function(ctx, 1, u() * x());
  EXPECT_EQ(lie_derivative(scaling, g), DiffForm::function(ctx, 1, Expr(2) * u() * x()));
}
